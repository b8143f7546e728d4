#include "bnw/citest.hpp"
#include <cstdint>

#include <cmath>
#include <limits>

namespace bnw {

CiType parse_ci(const std::string& name) {
    if (name == "g2") return CiType::g2;
    if (name == "x2") return CiType::x2;
    throw UsageError("unknown independence test '" + name + "' (expected g2 or x2)");
}

std::string ci_name(CiType t) { return t == CiType::g2 ? "g2" : "x2"; }

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-14;

// Series for P(a,x), converges fast when x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a,x), for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw DataError("gamma_p: need a > 0 and x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw DataError("gamma_q: need a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, double k) {
    if (k <= 0.0) throw DataError("chi2_sf: dof must be positive");
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * k, 0.5 * x);
}

CiResult ci_test(const Dataset& data, int x, int y, const std::vector<int>& z, CiType t) {
    for (int zi : z)
        if (zi == x || zi == y) throw DataError("ci_test: conditioning set overlaps x or y");
    if (x == y) throw DataError("ci_test: x and y must differ");

    std::vector<int> ids = z;
    ids.push_back(x);
    ids.push_back(y);
    ContingencyTable tab = counts(data, ids);

    const std::size_t rx = static_cast<std::size_t>(data.variable(x).cardinality());
    const std::size_t ry = static_cast<std::size_t>(data.variable(y).cardinality());
    const std::size_t block = rx * ry;
    const std::size_t strata = tab.cells.size() / block;

    double stat = 0.0;
    int nonzero_strata = 0;
    bool x_varies = false;
    bool y_varies = false;

    std::vector<double> row(rx), col(ry);
    for (std::size_t s = 0; s < strata; ++s) {
        const std::int64_t* cell = tab.cells.data() + s * block;
        double total = 0.0;
        std::fill(row.begin(), row.end(), 0.0);
        std::fill(col.begin(), col.end(), 0.0);
        for (std::size_t i = 0; i < rx; ++i)
            for (std::size_t j = 0; j < ry; ++j) {
                double o = static_cast<double>(cell[i * ry + j]);
                row[i] += o;
                col[j] += o;
                total += o;
            }
        if (total == 0.0) continue;
        ++nonzero_strata;
        int live_rows = 0, live_cols = 0;
        for (double v : row) live_rows += v > 0.0;
        for (double v : col) live_cols += v > 0.0;
        if (live_rows > 1) x_varies = true;
        if (live_cols > 1) y_varies = true;

        for (std::size_t i = 0; i < rx; ++i) {
            if (row[i] == 0.0) continue;
            for (std::size_t j = 0; j < ry; ++j) {
                double e = row[i] * col[j] / total;
                double o = static_cast<double>(cell[i * ry + j]);
                if (t == CiType::g2) {
                    if (o > 0.0) stat += 2.0 * o * std::log(o / e);
                } else if (e > 0.0) {
                    stat += (o - e) * (o - e) / e;
                }
            }
        }
    }

    CiResult res;
    res.statistic = stat;
    res.dof = static_cast<int>((rx - 1) * (ry - 1)) * std::max(nonzero_strata, 1);
    if (res.dof < 1) res.dof = 1;
    res.degenerate = !(x_varies && y_varies);
    res.p_value = res.degenerate ? 1.0 : chi2_sf(stat, static_cast<double>(res.dof));
    return res;
}

CiResult ci_test(const Dataset& data, const std::string& x, const std::string& y,
                 const std::vector<std::string>& z, CiType t) {
    std::vector<int> ids;
    ids.reserve(z.size());
    for (const auto& name : z) ids.push_back(data.var_index(name));
    return ci_test(data, data.var_index(x), data.var_index(y), ids, t);
}

}  // namespace bnw
