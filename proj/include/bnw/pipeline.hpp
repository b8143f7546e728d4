#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bnw/bayesnet.hpp"
#include "bnw/ensemble.hpp"
#include "bnw/index.hpp"
#include "bnw/weights.hpp"

namespace bnw {

struct RunConfig {
    std::string data_path;
    std::string schema_path;
    std::string constraints_path;
    std::string external_weights_path;
    std::string network_path;  // serialized net for simulate
    std::string out_dir = ".";
    std::string target;     // must name the schema's target variable when set
    std::string group_var;  // group labels for rankings
    std::vector<std::string> schemes{"equal", "bn", "spearman"};
    std::string strength_algorithm;  // empty: the representative's algorithm
    std::string baseline = "equal";
    double threshold = 6.0;
    int bootstrap = 200;
    BnMode mode = BnMode::literal;
    double discount = 1.0;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::size_t sample_rows = 0;  // simulate
    RfConfig rf;
    LearnerConfig learner;

    // key = value lines; '#' starts a comment. Unknown keys are errors.
    static RunConfig from_file(const std::string& path);
};

std::string canonical_scheme(const std::string& name);  // accepts eq/equal etc.

struct LearnArtifacts {
    SuiteResult suite;
    ArcOccurrenceTable consensus;
    RobustNetwork robust;
    std::string representative;
    Dag representative_dag;
};

LearnArtifacts run_learn_pipeline(const RunConfig& cfg, const Dataset& data,
                                  const ConstraintSet& c);

struct WeightsArtifacts {
    bool have_learn = false;
    LearnArtifacts learn;
    StrengthMap strengths;
    std::vector<WeightVector> weights;  // requested scheme order
};

WeightsArtifacts run_weights_pipeline(const RunConfig& cfg, const Dataset& data,
                                      const ConstraintSet& c);

// Table-style CSV: one row per dimension, one percentage column per scheme.
std::string weights_to_csv(const std::vector<WeightVector>& weights);

// Each command computes everything first, then writes its files atomically;
// the returned paths are the files written.
std::vector<std::string> cmd_learn(const RunConfig& cfg);
std::vector<std::string> cmd_weights(const RunConfig& cfg);
std::vector<std::string> cmd_compare(const RunConfig& cfg);
std::vector<std::string> cmd_simulate(const RunConfig& cfg);
std::vector<std::string> cmd_strength(const RunConfig& cfg);

}  // namespace bnw
