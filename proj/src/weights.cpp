#include "bnw/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "bnw/rng.hpp"

namespace bnw {

WeightVector normalize(WeightVector w) {
    double sum = 0.0;
    for (const auto& [name, value] : w.weights) {
        if (value < 0.0) throw DataError("negative weight for '" + name + "'");
        sum += value;
    }
    if (sum <= 0.0)
        throw DataError("all " + (w.scheme.empty() ? std::string("weights") : w.scheme + " weights") +
                        " are zero; nothing to normalize");
    for (auto& [name, value] : w.weights) value /= sum;
    w.normalized = true;
    return w;
}

BnMode parse_bn_mode(const std::string& name) {
    if (name == "literal") return BnMode::literal;
    if (name == "dwi") return BnMode::dwi;
    throw UsageError("unknown mode '" + name + "' (expected literal or dwi)");
}

WeightVector bn_weights(const Dag& g, const std::map<Arc, double>& strengths,
                        const std::string& target, const std::vector<std::string>& dims,
                        BnMode mode, double discount, BnWeightDetails* details) {
    if (!g.has_node(target)) throw DataError("target '" + target + "' is not in the graph");
    if (mode == BnMode::dwi && !(discount > 0.0 && discount <= 1.0))
        throw UsageError("discount must lie in (0, 1]");

    WeightVector w;
    w.scheme = "bn";
    for (const auto& dim : dims) {
        if (dim == target) throw UsageError("target '" + target + "' listed among dimensions");
        double raw = 0.0;
        std::vector<PathContribution> contribs;
        if (g.has_node(dim)) {
            for (const Path& p : directed_paths(g, dim, target)) {
                PathContribution pc;
                pc.length = p.length();
                pc.sigma = 1.0;
                for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
                    const auto& from = g.nodes()[static_cast<std::size_t>(p.nodes[i])];
                    const auto& to = g.nodes()[static_cast<std::size_t>(p.nodes[i + 1])];
                    pc.nodes.push_back(from);
                    auto it = strengths.find({from, to});
                    if (it == strengths.end())
                        throw DataError("no strength recorded for arc " + from + " -> " + to);
                    pc.sigma *= it->second;
                }
                pc.nodes.push_back(target);
                pc.contribution = mode == BnMode::literal
                                      ? std::pow(pc.sigma, static_cast<double>(pc.length))
                                      : pc.sigma * std::pow(discount,
                                                            static_cast<double>(pc.length));
                raw += pc.contribution;
                contribs.push_back(std::move(pc));
            }
        }
        w.weights[dim] = raw;
        if (details) details->paths[dim] = std::move(contribs);
    }
    return normalize(std::move(w));
}

std::vector<double> average_ranks(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double shared = 0.5 * static_cast<double>(i + j) + 1.0;  // mean of ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) return std::nan("");
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DataError("spearman_rho: length mismatch");
    if (a.size() < 2) throw DataError("spearman_rho: need at least two observations");
    return pearson(average_ranks(a), average_ranks(b));
}

WeightVector spearman_weights(const Dataset& data, const std::string& target,
                              const std::vector<std::string>& dims) {
    if (dims.size() < 2) throw UsageError("spearman weights need at least two dimensions");

    WeightVector w;
    w.scheme = "spearman";

    std::vector<std::vector<double>> ranks;
    std::vector<bool> constant;
    std::vector<std::string> cols = dims;
    cols.push_back(target);
    for (const auto& name : cols) {
        std::vector<double> values = achievement_column(data, name);
        std::vector<double> r = average_ranks(values);
        bool is_const = std::all_of(values.begin(), values.end(),
                                    [&](double v) { return v == values.front(); });
        if (is_const)
            w.notes.push_back("variable '" + name + "' is constant; its correlations are 0");
        ranks.push_back(std::move(r));
        constant.push_back(is_const);
    }

    auto rho = [&](std::size_t i, std::size_t j) {
        if (constant[i] || constant[j]) return 0.0;
        double r = pearson(ranks[i], ranks[j]);
        return std::isnan(r) ? 0.0 : r;
    };

    const std::size_t d = dims.size();
    const std::size_t t = d;  // target column index
    for (std::size_t i = 0; i < d; ++i) {
        double raw = std::fabs(rho(i, t));
        for (std::size_t j = 0; j < d; ++j)
            if (j != i) raw += 0.5 * std::fabs(rho(i, j));
        w.weights[dims[i]] = raw;
    }
    return normalize(std::move(w));
}

WeightVector equal_weights(const std::vector<std::string>& dims) {
    if (dims.empty()) throw UsageError("equal weights need at least one dimension");
    WeightVector w;
    w.scheme = "equal";
    for (const auto& dim : dims) w.weights[dim] = 1.0 / static_cast<double>(dims.size());
    w.normalized = true;
    return w;
}

namespace {

// Column-pivoted Householder QR least squares. Errors on rank deficiency,
// naming the columns pivoted past the numerical rank.
std::vector<double> qr_least_squares(std::vector<std::vector<double>> cols, std::vector<double> y,
                                     const std::vector<std::string>& names) {
    const std::size_t d = cols.size();
    const std::size_t n = y.size();
    std::vector<std::size_t> piv(d);
    std::iota(piv.begin(), piv.end(), std::size_t{0});

    auto tail_norm2 = [&](std::size_t j, std::size_t k) {
        double s = 0.0;
        for (std::size_t i = k; i < n; ++i) s += cols[j][i] * cols[j][i];
        return s;
    };

    double r00 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        std::size_t pick = k;
        double best = tail_norm2(k, k);
        for (std::size_t j = k + 1; j < d; ++j) {
            double cand = tail_norm2(j, k);
            if (cand > best) {
                best = cand;
                pick = j;
            }
        }
        if (pick != k) {
            std::swap(cols[k], cols[pick]);
            std::swap(piv[k], piv[pick]);
        }

        // Householder vector for column k below row k.
        double alpha = std::sqrt(best);
        if (cols[k][k] > 0.0) alpha = -alpha;
        if (k == 0) r00 = std::fabs(alpha);
        if (std::fabs(alpha) <= 1e-12 * (r00 > 0.0 ? r00 : 1.0) ||
            std::fabs(alpha) < 1e-300) {
            std::string offenders;
            for (std::size_t j = k; j < d; ++j)
                offenders += (offenders.empty() ? "" : ", ") + names[piv[j]];
            throw DataError("design matrix is rank deficient; collinear columns: " + offenders);
        }

        std::vector<double> v(n, 0.0);
        for (std::size_t i = k; i < n; ++i) v[i] = cols[k][i];
        v[k] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 > 0.0) {
            auto reflect = [&](std::vector<double>& x) {
                double dot = 0.0;
                for (std::size_t i = k; i < n; ++i) dot += v[i] * x[i];
                const double f = 2.0 * dot / vnorm2;
                for (std::size_t i = k; i < n; ++i) x[i] -= f * v[i];
            };
            for (std::size_t j = k; j < d; ++j) reflect(cols[j]);
            reflect(y);
        }
        cols[k][k] = alpha;
    }

    // Back substitution on the upper triangle.
    std::vector<double> beta_piv(d, 0.0);
    for (std::size_t k = d; k-- > 0;) {
        double s = y[k];
        for (std::size_t j = k + 1; j < d; ++j) s -= cols[j][k] * beta_piv[j];
        beta_piv[k] = s / cols[k][k];
    }
    std::vector<double> beta(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) beta[piv[k]] = beta_piv[k];
    return beta;
}

// Zero mean, unit sample variance; errors on constant columns.
void standardize(std::vector<double>& xs, const std::string& name) {
    const double n = static_cast<double>(xs.size());
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    if (ss <= 0.0) throw DataError("column '" + name + "' is constant");
    const double sd = std::sqrt(ss / (n - 1.0));
    for (double& x : xs) x = (x - mean) / sd;
}

}  // namespace

WeightVector ols_weights(const Dataset& data, const std::string& target,
                         const std::vector<std::string>& dims) {
    if (dims.empty()) throw UsageError("ols weights need at least one dimension");
    if (data.n_rows() <= dims.size())
        throw DataError("least squares needs more rows than dimensions");

    std::vector<std::vector<double>> cols;
    for (const auto& dim : dims) {
        std::vector<double> xs = achievement_column(data, dim);
        standardize(xs, dim);
        cols.push_back(std::move(xs));
    }
    std::vector<double> y = achievement_column(data, target);
    standardize(y, target);

    std::vector<double> beta = qr_least_squares(std::move(cols), std::move(y), dims);

    WeightVector w;
    w.scheme = "ols";
    for (std::size_t i = 0; i < dims.size(); ++i) w.weights[dims[i]] = std::fabs(beta[i]);
    return normalize(std::move(w));
}

namespace {

struct TreeTask {
    const std::vector<std::vector<double>>& x;  // per-dimension columns
    const std::vector<double>& y;
    int mtry;
    int min_leaf;
};

// Recursive variance-reduction splitter; credits each split's squared-error
// decrease to the split dimension. Nothing is predicted, so no tree is kept.
void grow_tree(const TreeTask& task, std::vector<std::size_t>& rows, std::size_t begin,
               std::size_t end, Rng& rng, std::vector<double>& importance) {
    const std::size_t m = end - begin;
    if (m < 2 * static_cast<std::size_t>(task.min_leaf)) return;

    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double v = task.y[rows[i]];
        sum += v;
        sum2 += v * v;
    }
    const double sse_parent = sum2 - sum * sum / static_cast<double>(m);
    if (sse_parent <= 1e-12) return;

    const std::size_t d = task.x.size();
    std::vector<std::size_t> pool(d);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    const std::size_t mtry = std::min<std::size_t>(static_cast<std::size_t>(task.mtry), d);
    for (std::size_t i = 0; i < mtry; ++i) {
        std::size_t j = i + uniform_index(rng, d - i);
        std::swap(pool[i], pool[j]);
    }
    std::vector<std::size_t> cand(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(mtry));
    std::sort(cand.begin(), cand.end());

    double best_gain = 0.0;
    std::size_t best_dim = d;
    std::size_t best_split = 0;  // rows [begin, begin+split) go left
    std::vector<std::size_t> scratch(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                     rows.begin() + static_cast<std::ptrdiff_t>(end));
    std::vector<std::size_t> best_order;

    for (std::size_t dim : cand) {
        const std::vector<double>& xs = task.x[dim];
        std::stable_sort(scratch.begin(), scratch.end(),
                         [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
        double left_sum = 0.0, left_sum2 = 0.0;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double v = task.y[scratch[i]];
            left_sum += v;
            left_sum2 += v * v;
            const std::size_t nl = i + 1, nr = m - nl;
            if (nl < static_cast<std::size_t>(task.min_leaf) ||
                nr < static_cast<std::size_t>(task.min_leaf))
                continue;
            if (xs[scratch[i]] == xs[scratch[i + 1]]) continue;  // not a boundary
            const double right_sum = sum - left_sum;
            const double right_sum2 = sum2 - left_sum2;
            const double sse =
                (left_sum2 - left_sum * left_sum / static_cast<double>(nl)) +
                (right_sum2 - right_sum * right_sum / static_cast<double>(nr));
            const double gain = sse_parent - sse;
            if (gain > best_gain) {
                best_gain = gain;
                best_dim = dim;
                best_split = nl;
                best_order = scratch;
            }
        }
    }

    if (best_dim >= d || best_gain <= 0.0) return;
    importance[best_dim] += best_gain;
    std::copy(best_order.begin(), best_order.end(),
              rows.begin() + static_cast<std::ptrdiff_t>(begin));
    grow_tree(task, rows, begin, begin + best_split, rng, importance);
    grow_tree(task, rows, begin + best_split, end, rng, importance);
}

}  // namespace

WeightVector rf_weights(const Dataset& data, const std::string& target,
                        const std::vector<std::string>& dims, const RfConfig& cfg) {
    if (cfg.trees < 1) throw UsageError("forest needs at least one tree");
    if (cfg.min_leaf < 1) throw UsageError("min_leaf must be >= 1");
    if (cfg.jobs < 1) throw UsageError("jobs must be >= 1");
    if (dims.empty()) throw UsageError("rf weights need at least one dimension");

    const std::size_t d = dims.size();
    const int mtry = cfg.mtry > 0 ? cfg.mtry
                                  : static_cast<int>((d + 2) / 3);  // ceil(d / 3)

    std::vector<std::vector<double>> x;
    for (const auto& dim : dims) x.push_back(achievement_column(data, dim));
    const std::vector<double> y = achievement_column(data, target);
    const std::size_t n = data.n_rows();

    std::vector<std::vector<double>> per_tree(static_cast<std::size_t>(cfg.trees),
                                              std::vector<double>(d, 0.0));
    TreeTask task{x, y, mtry, cfg.min_leaf};

    auto run_range = [&](std::size_t from, std::size_t to) {
        for (std::size_t t = from; t < to; ++t) {
            Rng rng(derive_seed(cfg.seed, "tree", t));
            std::vector<std::size_t> rows(n);
            for (std::size_t i = 0; i < n; ++i) rows[i] = uniform_index(rng, n);
            grow_tree(task, rows, 0, n, rng, per_tree[t]);
        }
    };

    const std::size_t jobs = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs),
                                                   static_cast<std::size_t>(cfg.trees));
    if (jobs <= 1) {
        run_range(0, static_cast<std::size_t>(cfg.trees));
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (static_cast<std::size_t>(cfg.trees) + jobs - 1) / jobs;
        for (std::size_t j = 0; j < jobs; ++j) {
            std::size_t from = j * chunk;
            std::size_t to = std::min(static_cast<std::size_t>(cfg.trees), from + chunk);
            if (from < to) pool.emplace_back(run_range, from, to);
        }
        for (auto& t : pool) t.join();
    }

    WeightVector w;
    w.scheme = "rf";
    for (std::size_t i = 0; i < d; ++i) {
        double total = 0.0;
        for (const auto& imp : per_tree) total += imp[i];
        w.weights[dims[i]] = total;
    }
    return normalize(std::move(w));
}

WeightVector external_weights(const std::string& path, const std::vector<std::string>& dims) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open weights file '" + path + "'");

    std::map<std::string, double> shares;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos || line[b] == '#') continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError("weights file line " + std::to_string(lineno) +
                            ": expected 'dimension,share'");
        std::string name = line.substr(b, comma - b);
        std::string value = line.substr(comma + 1);
        std::size_t e = name.find_last_not_of(" \t");
        name = name.substr(0, e + 1);
        double share;
        try {
            share = std::stod(value);
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header row
            throw DataError("weights file line " + std::to_string(lineno) +
                            ": share '" + value + "' is not a number");
        }
        if (share < 0.0)
            throw DataError("weights file line " + std::to_string(lineno) + ": dimension '" +
                            name + "' has a negative share");
        shares[name] = share;
    }

    WeightVector w;
    w.scheme = "external";
    for (const auto& dim : dims) {
        auto it = shares.find(dim);
        if (it == shares.end())
            throw DataError("weights file is missing dimension '" + dim + "'");
        w.weights[dim] = it->second;
        shares.erase(it);
    }
    if (!shares.empty())
        throw DataError("weights file names unknown dimension '" + shares.begin()->first + "'");
    return normalize(std::move(w));
}

}  // namespace bnw
