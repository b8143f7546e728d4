#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bnw/common.hpp"

namespace bnw {

enum class VarRole { dimension, target, control };

std::string to_string(VarRole role);
VarRole parse_role(const std::string& text);

struct VariableSpec {
    std::string name;
    std::vector<std::string> categories;  // declared order drives ranks and scores
    VarRole role = VarRole::dimension;
    std::optional<std::vector<double>> scores;  // per-category achievement in [0,1]

    int cardinality() const { return static_cast<int>(categories.size()); }
    int category_index(const std::string& label) const;  // -1 if unknown
    // Declared mapping if present, otherwise linear in category index.
    double score_of(int category) const;
    void validate() const;
};

struct LoadReport {
    std::vector<std::size_t> dropped_rows;  // 1-based data rows refused for empty cells
};

// Immutable table of categorical observations. Cells hold 0-based category
// indices into each variable's declared category list.
class Dataset {
public:
    Dataset(std::vector<VariableSpec> schema, std::vector<std::int32_t> cells);

    std::size_t n_rows() const { return n_; }
    std::size_t n_vars() const { return schema_.size(); }
    const std::vector<VariableSpec>& schema() const { return schema_; }
    const VariableSpec& variable(std::size_t j) const { return schema_[j]; }
    int var_index(const std::string& name) const;  // throws DataError if unknown
    std::int32_t cell(std::size_t row, std::size_t var) const {
        return cells_[row * schema_.size() + var];
    }
    const std::int32_t* row(std::size_t i) const { return cells_.data() + i * schema_.size(); }

    std::vector<int> dimension_vars() const;
    std::vector<std::string> dimension_names() const;
    int target_var() const;

private:
    std::vector<VariableSpec> schema_;
    std::vector<std::int32_t> cells_;  // row-major, n_ x schema_.size()
    std::size_t n_ = 0;
};

// Dense joint counts over an ordered variable subset, last variable fastest.
struct ContingencyTable {
    std::vector<int> var_ids;
    std::vector<int> cards;
    std::vector<std::int64_t> cells;
    std::int64_t total = 0;

    std::int64_t at(const std::vector<int>& levels) const;
    // Keep the variables at the given positions (into var_ids), sum out the rest.
    ContingencyTable marginalize(const std::vector<int>& keep_positions) const;
};

ContingencyTable counts(const Dataset& data, const std::vector<std::string>& vars);
ContingencyTable counts(const Dataset& data, const std::vector<int>& var_ids);

// n x d achievement scores in [0,1], one column per dimension variable.
struct ScoreMatrix {
    std::vector<std::string> dims;
    std::vector<double> values;  // row-major, n x dims.size()
    std::size_t n = 0;

    double at(std::size_t row, std::size_t dim) const { return values[row * dims.size() + dim]; }
};

using ScoreMappings = std::map<std::string, std::vector<double>>;

ScoreMatrix achievement_scores(const Dataset& data, const ScoreMappings& mapping = {});
// Achievement scores for a single variable of any role (mapping override optional).
std::vector<double> achievement_column(const Dataset& data, const std::string& var,
                                       const ScoreMappings& mapping = {});

std::vector<VariableSpec> load_schema(const std::string& path);
Dataset load_csv(const std::string& path, std::vector<VariableSpec> schema,
                 LoadReport* report = nullptr);
std::string to_csv(const Dataset& data);

Dataset bootstrap_resample(const Dataset& data, std::uint64_t seed);

}  // namespace bnw
