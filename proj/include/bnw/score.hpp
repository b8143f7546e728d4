#pragma once

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "bnw/dataset.hpp"
#include "bnw/graph.hpp"

namespace bnw {

enum class ScoreType { bic, aic, k2 };

ScoreType parse_score(const std::string& name);
std::string score_name(ScoreType t);

// Multinomial log-likelihood of one variable given its parents,
// natural log, with the 0 * ln 0 = 0 convention.
double log_likelihood(const Dataset& data, int var, const std::vector<int>& parents);

// Decomposable local network scores, larger is better.
double local_score(const Dataset& data, int var, const std::vector<int>& parents, ScoreType t);

// Sum of local scores over the graph's families.
double global_score(const Dag& g, const Dataset& data, ScoreType t);

// Shared cache of local scores. Concurrent readers, exclusive writers;
// duplicate stores of the same key are harmless (scores are deterministic).
class LocalScoreCache {
public:
    std::optional<double> find(int var, const std::vector<int>& parents, ScoreType t) const;
    void store(int var, const std::vector<int>& parents, ScoreType t, double value);
    std::size_t size() const;

private:
    using Key = std::tuple<int, int, std::vector<int>>;  // var, type, sorted parents
    mutable std::shared_mutex mu_;
    std::map<Key, double> map_;
};

// Scoring front end bound to one dataset and score type.
class Scorer {
public:
    Scorer(const Dataset& data, ScoreType type) : data_(&data), type_(type) {}

    double local(int var, std::vector<int> parents) const;
    double local(const std::string& var, const std::vector<std::string>& parents) const;
    double total(const Dag& g) const;

    ScoreType type() const { return type_; }
    const Dataset& data() const { return *data_; }

private:
    const Dataset* data_;
    ScoreType type_;
    mutable LocalScoreCache cache_;
};

}  // namespace bnw
