#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bnw/bayesnet.hpp"
#include "bnw/dataset.hpp"
#include "bnw/ensemble.hpp"
#include "bnw/graph.hpp"
#include "bnw/rng.hpp"

namespace testutil {

bnw::VariableSpec var(std::string name, std::vector<std::string> cats,
                      bnw::VarRole role = bnw::VarRole::dimension);
bnw::Dataset make_dataset(std::vector<bnw::VariableSpec> schema,
                          const std::vector<std::vector<int>>& rows);

// d independent uniform dimension variables d1..dd plus target t.
bnw::Dataset noise_dataset(std::size_t n, int dims, std::uint64_t seed, int cats = 2);

// Binary x strongly coupled to y, plus one noise dimension and a noise target.
bnw::Dataset coupled_noise(std::size_t n, std::uint64_t seed);

// Binary network whose child probabilities rise monotonically with a
// weighted mean of the parent values; effects stay away from independence.
bnw::DiscreteBn monotone_bn(const bnw::Dag& g, double base = 0.12, double span = 0.76);

// The fixed 8-node, 10-arc recovery benchmark.
const bnw::Dag& benchmark_dag();
bnw::DiscreteBn benchmark_bn();

// a -> b -> c -> ... binary chain of the given length.
bnw::DiscreteBn chain_bn(int len);

// Twelve-arc survey topology with pinned strengths: the two direct parents
// of the target carry the strongest arcs, four dimensions sit downstream.
struct Replica {
    bnw::Dag graph;
    std::map<bnw::Arc, double> strengths;
    std::vector<std::string> dims;
    std::string target;
};
Replica survey_replica();

// Published consensus fragment: twelve arcs, eleven per-algorithm entries
// each, plus the published total.
struct ConsensusRow {
    std::string from, to;
    std::array<double, 11> entries;
    double total;
};
const std::vector<ConsensusRow>& consensus_rows();

// A suite whose graphs reproduce exactly the consensus_rows entries.
bnw::SuiteResult suite_from_rows();

// Published external shares (percent) and the reference bn column.
const std::map<std::string, double>& external_shares();
const std::map<std::string, double>& bn_column();

bnw::Dag random_dag(bnw::Rng& rng, int n_nodes, double arc_prob);
std::map<bnw::Arc, double> random_strengths(bnw::Rng& rng, const bnw::Dag& g);

// Brute-force simple-path enumeration, node-name sequences sorted.
std::vector<std::vector<std::string>> oracle_paths(const bnw::Dag& g, const std::string& from,
                                                   const std::string& to);

// Raw influence weights from the enumerated paths: sum of sigma^length.
std::map<std::string, double> oracle_bn_raw(const bnw::Dag& g,
                                            const std::map<bnw::Arc, double>& strengths,
                                            const std::string& target,
                                            const std::vector<std::string>& dims);

// Equivalence-class CPDAG: try every orientation of the skeleton, keep the
// acyclic ones with identical v-structures, intersect the arc directions.
bnw::Pdag oracle_cpdag(const bnw::Dag& g);

// Upper-tail chi-square probability by direct Simpson integration.
double chi2_sf_oracle(double x, double k);

// One-sample Kolmogorov-Smirnov distance to the uniform distribution.
double ks_uniform(std::vector<double> pvals);

// Scratch directory under the working directory, wiped on construction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    std::filesystem::path path() const { return dir_; }
    std::string file(const std::string& name) const;

private:
    std::filesystem::path dir_;
};

void write_text(const std::string& path, const std::string& content);
std::string schema_text(const std::vector<bnw::VariableSpec>& schema);

}  // namespace testutil
