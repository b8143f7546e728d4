#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bnw/dataset.hpp"
#include "bnw/graph.hpp"
#include "bnw/rng.hpp"

namespace bnw {

// Conditional probability table of one node. Rows are parent configurations
// (mixed-radix over `parents`, last parent fastest), each row holds one
// probability per child category.
struct Cpt {
    std::vector<int> parents;   // node indices, fixes the config ordering
    std::vector<double> probs;  // q rows of r values, row-major

    std::size_t row_count(std::size_t r) const { return probs.size() / r; }
};

class DiscreteBn {
public:
    DiscreteBn(Dag structure, std::vector<VariableSpec> variables, std::vector<Cpt> cpts);

    const Dag& graph() const { return graph_; }
    const std::vector<VariableSpec>& variables() const { return variables_; }
    const VariableSpec& variable(int v) const { return variables_[static_cast<std::size_t>(v)]; }
    const Cpt& cpt(int v) const { return cpts_[static_cast<std::size_t>(v)]; }
    std::size_t node_count() const { return variables_.size(); }

private:
    void validate() const;  // rows sum to 1 (1e-12), probabilities >= 0

    Dag graph_;
    std::vector<VariableSpec> variables_;
    std::vector<Cpt> cpts_;
};

// Maximum-likelihood CPTs with additive smoothing:
// (count + pseudo) / (total + pseudo * r). With pseudo_count 0, parent
// configurations never seen in the data fall back to the uniform row.
DiscreteBn fit_cpts(const Dag& g, const Dataset& data, double pseudo_count = 1.0);

// Ancestral sampling. Each row draws from its own derived seed, so any
// row-partitioned parallel schedule reproduces the sequential output.
Dataset forward_sample(const DiscreteBn& bn, std::size_t n, std::uint64_t seed);

std::string bn_to_text(const DiscreteBn& bn);
DiscreteBn bn_from_text(const std::string& text);

void save_bn(const DiscreteBn& bn, const std::string& path);
DiscreteBn load_bn(const std::string& path);

}  // namespace bnw
