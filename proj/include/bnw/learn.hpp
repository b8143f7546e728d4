#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "bnw/citest.hpp"
#include "bnw/dataset.hpp"
#include "bnw/graph.hpp"
#include "bnw/score.hpp"

namespace bnw {

struct LearnerConfig {
    ScoreType score = ScoreType::bic;
    CiType test = CiType::g2;
    double alpha = 0.05;
    int tabu_length = 10;
    int max_iterations = 100;  // non-improving tabu moves before giving up
    int restarts = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class BlanketMethod { gs, iamb, fast_iamb, inter_iamb };

BlanketMethod parse_blanket_method(const std::string& name);

// Normalized undirected edges, first name < second name.
using EdgeSet = std::set<Arc>;

// Greedy single-arc search (add / delete / reverse) from the whitelist-only
// start graph. Ties between equal-scoring moves go to the first move in
// (add, delete, reverse) order, then lexicographic (from, to).
Dag hill_climb(const Dataset& data, ScoreType s, const ConstraintSet& c = {},
               const LearnerConfig& cfg = {});

// hill_climb that escapes local optima by taking the best non-tabu move for
// up to cfg.max_iterations non-improving steps; returns the best graph seen.
// max_iterations 0 collapses to plain hill_climb.
Dag tabu_search(const Dataset& data, ScoreType s, const ConstraintSet& c = {},
                const LearnerConfig& cfg = {});

// Markov blanket of one variable. Variables whitelisted towards or from v
// are always kept; pairs blacklisted in both directions are never candidates.
std::vector<int> markov_blanket(const Dataset& data, int v, BlanketMethod m, double alpha,
                                const ConstraintSet& c = {}, CiType test = CiType::g2);
std::vector<std::string> markov_blanket(const Dataset& data, const std::string& v,
                                        BlanketMethod m, double alpha,
                                        const ConstraintSet& c = {}, CiType test = CiType::g2);

// Blanket-based structure learning: AND-rule skeleton, subset pruning,
// v-structures by separating set, Meek closure. The result always satisfies
// check_constraints; forced repairs are logged.
Pdag constraint_learn(const Dataset& data, BlanketMethod m, double alpha,
                      const ConstraintSet& c = {}, CiType test = CiType::g2,
                      std::vector<std::string>* log = nullptr);

// Max-min parent-children skeleton with symmetric (AND) correction.
EdgeSet mmpc_skeleton(const Dataset& data, double alpha, const ConstraintSet& c = {},
                      CiType test = CiType::g2);

enum class RestrictMethod { mmpc, iamb };
enum class MaximizeMethod { hc, tabu };

// Score search whose add moves are confined to `allowed` pairs (whitelisted
// arcs are exempt). Passing the complete pair set reproduces the plain
// search; an empty set with an empty whitelist yields the empty graph.
Dag restricted_score_search(const Dataset& data, ScoreType s, const ConstraintSet& c,
                            const LearnerConfig& cfg, MaximizeMethod maximize,
                            const EdgeSet& allowed);

// Restrict-maximize: a constraint-based skeleton feeds the score search.
Dag hybrid_learn(const Dataset& data, RestrictMethod restrict_phase, MaximizeMethod maximize,
                 ScoreType s, double alpha, const ConstraintSet& c = {},
                 const LearnerConfig& cfg = {});

// Skeleton used by hybrid_learn's iamb restrict phase (exposed for tests).
EdgeSet blanket_skeleton(const Dataset& data, BlanketMethod m, double alpha,
                         const ConstraintSet& c = {}, CiType test = CiType::g2);

}  // namespace bnw
