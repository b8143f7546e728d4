#include "bnw/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bnw {

CompositeIndex composite_index(const ScoreMatrix& scores, const WeightVector& w) {
    if (!w.normalized) throw UsageError("composite index needs normalized weights");
    if (scores.dims.size() != w.weights.size())
        throw DataError("score columns and weight keys differ in count");
    std::vector<double> col_weight(scores.dims.size());
    for (std::size_t j = 0; j < scores.dims.size(); ++j) {
        auto it = w.weights.find(scores.dims[j]);
        if (it == w.weights.end())
            throw DataError("no weight for score column '" + scores.dims[j] + "'");
        col_weight[j] = it->second;
    }

    CompositeIndex idx;
    idx.scheme = w.scheme;
    idx.values.resize(scores.n);
    for (std::size_t i = 0; i < scores.n; ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < scores.dims.size(); ++j)
            v += col_weight[j] * scores.at(i, j);
        idx.values[i] = v;
    }
    return idx;
}

RankTable group_rankings(const CompositeIndex& idx, const std::vector<std::string>& groups) {
    if (idx.values.empty()) throw DataError("no units to rank");
    if (groups.size() != idx.values.size())
        throw DataError("every unit needs a group label (" + std::to_string(groups.size()) +
                        " labels for " + std::to_string(idx.values.size()) + " units)");

    std::map<std::string, std::pair<double, std::size_t>> acc;  // sum, count
    for (std::size_t i = 0; i < groups.size(); ++i) {
        auto& slot = acc[groups[i]];
        slot.first += idx.values[i];
        slot.second += 1;
    }

    RankTable t;
    t.scheme = idx.scheme;
    for (const auto& [label, sums] : acc)
        t.means[label] = sums.first / static_cast<double>(sums.second);

    std::vector<std::string> order;
    for (const auto& [label, mean] : t.means) order.push_back(label);
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        if (t.means.at(a) != t.means.at(b)) return t.means.at(a) > t.means.at(b);
        return a < b;
    });
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        if (t.means.at(order[i]) == t.means.at(order[i + 1]))
            t.log.push_back("groups " + order[i] + " and " + order[i + 1] +
                            " tie on mean; ranked by label");

    t.groups = order;
    for (std::size_t i = 0; i < order.size(); ++i) t.ranks[order[i]] = static_cast<int>(i) + 1;
    return t;
}

RankShiftReport rank_shift_report(const std::vector<RankTable>& tables,
                                  const std::string& baseline) {
    if (tables.size() < 2) throw UsageError("rank shifts need at least two schemes");
    const RankTable* base = nullptr;
    for (const auto& t : tables)
        if (t.scheme == baseline) base = &t;
    if (!base) throw UsageError("baseline scheme '" + baseline + "' is not among the tables");

    std::vector<std::string> groups = base->groups;
    std::sort(groups.begin(), groups.end());
    for (const auto& t : tables) {
        std::vector<std::string> g = t.groups;
        std::sort(g.begin(), g.end());
        if (g != groups)
            throw DataError("scheme '" + t.scheme + "' ranks a different group set");
    }

    RankShiftReport report;
    report.baseline = baseline;
    for (const auto& group : groups) {
        RankShiftRow row;
        row.group = group;
        const int base_rank = base->ranks.at(group);
        for (const auto& t : tables) {
            const int r = t.ranks.at(group);
            row.ranks[t.scheme] = r;
            row.shift = std::max(row.shift, std::abs(r - base_rank));
        }
        report.rows.push_back(std::move(row));
    }
    std::sort(report.rows.begin(), report.rows.end(),
              [](const RankShiftRow& a, const RankShiftRow& b) {
                  if (a.shift != b.shift) return a.shift > b.shift;
                  return a.group < b.group;
              });
    return report;
}

namespace {

std::string fmt_mean(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

}  // namespace

std::string ranks_to_csv(const std::vector<RankTable>& tables) {
    std::ostringstream out;
    out << "group,scheme,mean,rank\n";
    for (const auto& t : tables)
        for (const auto& g : t.groups)
            out << g << ',' << t.scheme << ',' << fmt_mean(t.means.at(g)) << ','
                << t.ranks.at(g) << '\n';
    return out.str();
}

std::string shift_report_to_csv(const RankShiftReport& report) {
    std::ostringstream out;
    out << "group";
    std::vector<std::string> schemes;
    if (!report.rows.empty())
        for (const auto& [scheme, rank] : report.rows.front().ranks) schemes.push_back(scheme);
    for (const auto& s : schemes) out << ",rank_" << s;
    out << ",max_shift_vs_" << report.baseline << '\n';
    for (const auto& row : report.rows) {
        out << row.group;
        for (const auto& s : schemes) out << ',' << row.ranks.at(s);
        out << ',' << row.shift << '\n';
    }
    return out.str();
}

std::string bump_chart_csv(const std::vector<RankTable>& tables) {
    std::ostringstream out;
    out << "scheme_index,scheme,group,rank\n";
    for (std::size_t i = 0; i < tables.size(); ++i)
        for (const auto& g : tables[i].groups)
            out << i << ',' << tables[i].scheme << ',' << g << ',' << tables[i].ranks.at(g)
                << '\n';
    return out.str();
}

}  // namespace bnw
