#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bnw/dataset.hpp"
#include "bnw/graph.hpp"

namespace bnw {

struct WeightVector {
    std::string scheme;  // bn, equal, spearman, ols, rf, external
    std::map<std::string, double> weights;
    bool normalized = false;
    std::vector<std::string> notes;  // degeneracies worth surfacing (constant vars etc.)
};

// Divides by the weight sum. Errors when every weight is zero: a no-signal
// result must surface, not silently become NaN. Idempotent.
WeightVector normalize(WeightVector w);

// One directed path from a dimension to the target with its strength
// product sigma and its contribution to the dimension's raw weight.
struct PathContribution {
    std::vector<std::string> nodes;
    double sigma = 0.0;
    std::size_t length = 0;
    double contribution = 0.0;
};

struct BnWeightDetails {
    std::map<std::string, std::vector<PathContribution>> paths;
};

enum class BnMode { literal, dwi };

BnMode parse_bn_mode(const std::string& name);

// Influence weights from the learned structure: every directed path from a
// dimension to the target contributes sigma^length (literal mode) or
// sigma * discount^length (dwi mode), sigma being the product of the arc
// strengths along the path. Dimensions with no path get exactly 0.
WeightVector bn_weights(const Dag& g, const std::map<Arc, double>& strengths,
                        const std::string& target, const std::vector<std::string>& dims,
                        BnMode mode = BnMode::literal, double discount = 1.0,
                        BnWeightDetails* details = nullptr);

// w_i = |rho(i, target)| + 1/2 * sum over other dims j of |rho(i, j)|,
// with Spearman correlations (average ranks, tie-corrected), normalized.
WeightVector spearman_weights(const Dataset& data, const std::string& target,
                              const std::vector<std::string>& dims);

WeightVector equal_weights(const std::vector<std::string>& dims);

// Least squares of the standardized target score on standardized dimension
// scores; weights are absolute coefficients, normalized. Collinear or
// constant columns are an error naming the offenders.
WeightVector ols_weights(const Dataset& data, const std::string& target,
                         const std::vector<std::string>& dims);

struct RfConfig {
    int trees = 200;
    int mtry = 0;  // 0 picks ceil(d / 3)
    int min_leaf = 5;
    std::uint64_t seed = 0;
    int jobs = 1;
};

// Regression-forest importance: total squared-error decrease credited to
// each dimension across all split nodes of all trees, normalized.
WeightVector rf_weights(const Dataset& data, const std::string& target,
                        const std::vector<std::string>& dims, const RfConfig& cfg = {});

// Two-column CSV (dimension, nonnegative share) covering every dimension.
WeightVector external_weights(const std::string& path, const std::vector<std::string>& dims);

// Average ranks (1-based, ties share the mean rank) and the rank-based
// correlation built on them. Exposed for direct verification.
std::vector<double> average_ranks(const std::vector<double>& xs);
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace bnw
