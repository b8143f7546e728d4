#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bnw/dataset.hpp"
#include "bnw/graph.hpp"
#include "bnw/learn.hpp"

namespace bnw {

// The canonical eleven algorithm identifiers, in fixed column order:
// hc-bic, hc-aic, hc-k2, tabu-bic, tabu-aic, gs, iamb, fast-iamb,
// inter-iamb, mmhc-bic, rsmax2.
const std::vector<std::string>& canonical_algorithms();
bool is_canonical_algorithm(const std::string& name);

struct SuiteConfig {
    LearnerConfig learner;   // shared knobs; per-algorithm score/test applied on top
    std::uint64_t seed = 0;  // fans out to one derived seed per algorithm
    int jobs = 1;

    void validate() const;
};

struct SuiteEntry {
    std::string algorithm;
    bool is_dag = false;
    Dag dag;     // meaningful only when is_dag
    Pdag graph;  // consensus view; equals the DAG's arcs for score learners
    std::string manifest;
};

struct SuiteResult {
    std::vector<SuiteEntry> entries;  // exactly 11, canonical order
};

// Runs one algorithm by canonical id. Score and hybrid learners return DAGs
// (entry.is_dag true); constraint learners return PDAGs.
SuiteEntry learn_one(const std::string& algo, const Dataset& data, const ConstraintSet& c,
                     const LearnerConfig& cfg);

SuiteResult run_suite(const Dataset& data, const ConstraintSet& c = {},
                      const SuiteConfig& cfg = {});

struct ArcOccurrenceRow {
    Arc arc;
    std::vector<double> scores;  // one per algorithm column, each 0, 0.5 or 1
    double total = 0.0;
};

// Consensus occurrences: for every ordered pair and every algorithm, 1 when
// the graph holds the directed arc, 0.5 when it holds the reverse or an
// undirected edge, 0 otherwise. Rows sorted by total descending.
struct ArcOccurrenceTable {
    std::vector<std::string> algorithms;
    std::vector<ArcOccurrenceRow> rows;

    double total_of(const Arc& a) const;  // 0 when the pair never occurs
};

ArcOccurrenceTable consensus_table(const SuiteResult& sr);

struct RobustNetwork {
    Dag graph;
    std::map<Arc, double> totals;  // consensus total per kept arc
    double threshold = 6.0;
    std::vector<std::string> log;  // orientation ties, cycle drops
};

// Keeps pairs whose better direction scores >= threshold, oriented by the
// higher directed total (lexicographic on ties, logged). Arcs are admitted
// in descending total order; an arc that would close a cycle is the
// lowest-total arc of that cycle and is dropped (logged).
RobustNetwork robust_network(const ArcOccurrenceTable& t, double threshold = 6.0);

// The DAG-valued suite member holding the most robust arcs; ties broken by
// global BIC on `data`, then by canonical order.
std::pair<std::string, Dag> select_representative(const SuiteResult& sr, const RobustNetwork& rn,
                                                  const Dataset& data);

struct StrengthMap {
    std::map<Arc, double> strength;  // directed arc -> value in [0, 1]
    std::string algorithm;
    int bootstrap = 0;
    std::uint64_t seed = 0;
    int failures = 0;
};

// Bootstrap model averaging: strength(u->v) = share of replicates learning
// the directed arc plus half the share learning it undirected.
StrengthMap arc_strengths(const Dataset& data, const std::string& algo, int B,
                          const ConstraintSet& c, std::uint64_t seed, int jobs = 1);

std::string consensus_to_csv(const ArcOccurrenceTable& t);
std::string strengths_to_csv(const StrengthMap& s);

}  // namespace bnw
