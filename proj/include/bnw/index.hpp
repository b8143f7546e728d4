#pragma once

#include <map>
#include <string>
#include <vector>

#include "bnw/dataset.hpp"
#include "bnw/weights.hpp"

namespace bnw {

struct CompositeIndex {
    std::string scheme;
    std::vector<double> values;  // per unit, each in [0, 1]
};

// Weighted arithmetic mean of the achievement scores, one value per row.
// The weight keys must coincide with the score columns.
CompositeIndex composite_index(const ScoreMatrix& scores, const WeightVector& w);

struct RankTable {
    std::string scheme;
    std::vector<std::string> groups;     // in rank order, best first
    std::map<std::string, double> means;
    std::map<std::string, int> ranks;    // 1 = best; a permutation of 1..G
    std::vector<std::string> log;        // mean ties broken by label
};

// Groups units by label, ranks groups by unweighted mean index, descending.
// Equal means take consecutive ranks in label order (logged).
RankTable group_rankings(const CompositeIndex& idx, const std::vector<std::string>& groups);

struct RankShiftRow {
    std::string group;
    std::map<std::string, int> ranks;  // per scheme
    int shift = 0;                     // max |rank - baseline rank| over schemes
};

struct RankShiftReport {
    std::string baseline;
    std::vector<RankShiftRow> rows;  // sorted by shift descending, then label
};

RankShiftReport rank_shift_report(const std::vector<RankTable>& tables,
                                  const std::string& baseline = "equal");

std::string ranks_to_csv(const std::vector<RankTable>& tables);
std::string shift_report_to_csv(const RankShiftReport& report);
// Long-format rows (scheme position, scheme, group, rank) for bump charts.
std::string bump_chart_csv(const std::vector<RankTable>& tables);

}  // namespace bnw
