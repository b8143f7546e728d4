#include "bnw/score.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace bnw {

ScoreType parse_score(const std::string& name) {
    if (name == "bic") return ScoreType::bic;
    if (name == "aic") return ScoreType::aic;
    if (name == "k2") return ScoreType::k2;
    throw UsageError("unknown score '" + name + "' (expected bic, aic or k2)");
}

std::string score_name(ScoreType t) {
    switch (t) {
        case ScoreType::bic: return "bic";
        case ScoreType::aic: return "aic";
        case ScoreType::k2: return "k2";
    }
    return "?";
}

namespace {

// Counts for (parents..., var) with var varying fastest: cells come out
// grouped into one block of size r per parent configuration.
ContingencyTable family_counts(const Dataset& data, int var, std::vector<int> parents) {
    for (int p : parents)
        if (p == var) throw DataError("local score: variable listed among its own parents");
    std::sort(parents.begin(), parents.end());
    parents.push_back(var);
    return counts(data, parents);
}

}  // namespace

double log_likelihood(const Dataset& data, int var, const std::vector<int>& parents) {
    ContingencyTable tab = family_counts(data, var, parents);
    const std::size_t r = static_cast<std::size_t>(data.variable(var).cardinality());
    const std::size_t q = tab.cells.size() / r;
    double ll = 0.0;
    for (std::size_t j = 0; j < q; ++j) {
        long long nj = 0;
        for (std::size_t k = 0; k < r; ++k) nj += tab.cells[j * r + k];
        if (nj == 0) continue;
        for (std::size_t k = 0; k < r; ++k) {
            long long njk = tab.cells[j * r + k];
            if (njk > 0)
                ll += static_cast<double>(njk) *
                      std::log(static_cast<double>(njk) / static_cast<double>(nj));
        }
    }
    return ll;
}

double local_score(const Dataset& data, int var, const std::vector<int>& parents, ScoreType t) {
    const double r = data.variable(var).cardinality();
    double q = 1.0;
    for (int p : parents) q *= data.variable(p).cardinality();

    if (t == ScoreType::bic || t == ScoreType::aic) {
        const double k = (r - 1.0) * q;
        const double ll = log_likelihood(data, var, parents);
        if (t == ScoreType::bic)
            return ll - 0.5 * std::log(static_cast<double>(data.n_rows())) * k;
        return ll - k;
    }

    // K2: Dirichlet(1) marginal likelihood per parent configuration.
    ContingencyTable tab = family_counts(data, var, parents);
    const std::size_t rc = static_cast<std::size_t>(data.variable(var).cardinality());
    const std::size_t qc = tab.cells.size() / rc;
    const double lgr = std::lgamma(r);
    double score = 0.0;
    for (std::size_t j = 0; j < qc; ++j) {
        long long nj = 0;
        for (std::size_t k = 0; k < rc; ++k) nj += tab.cells[j * rc + k];
        score += lgr - std::lgamma(static_cast<double>(nj) + r);
        for (std::size_t k = 0; k < rc; ++k)
            score += std::lgamma(static_cast<double>(tab.cells[j * rc + k]) + 1.0);
    }
    return score;
}

double global_score(const Dag& g, const Dataset& data, ScoreType t) {
    Scorer s(data, t);
    return s.total(g);
}

std::optional<double> LocalScoreCache::find(int var, const std::vector<int>& parents,
                                            ScoreType t) const {
    Key key{var, static_cast<int>(t), parents};
    std::shared_lock lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void LocalScoreCache::store(int var, const std::vector<int>& parents, ScoreType t, double value) {
    Key key{var, static_cast<int>(t), parents};
    std::unique_lock lock(mu_);
    map_[key] = value;
}

std::size_t LocalScoreCache::size() const {
    std::shared_lock lock(mu_);
    return map_.size();
}

double Scorer::local(int var, std::vector<int> parents) const {
    std::sort(parents.begin(), parents.end());
    if (auto hit = cache_.find(var, parents, type_)) return *hit;
    double value = local_score(*data_, var, parents, type_);
    cache_.store(var, parents, type_, value);
    return value;
}

double Scorer::local(const std::string& var, const std::vector<std::string>& parents) const {
    std::vector<int> ids;
    ids.reserve(parents.size());
    for (const auto& p : parents) ids.push_back(data_->var_index(p));
    return local(data_->var_index(var), std::move(ids));
}

double Scorer::total(const Dag& g) const {
    double sum = 0.0;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        int var = data_->var_index(g.nodes()[v]);
        std::vector<int> parents;
        for (int p : g.parents(static_cast<int>(v)))
            parents.push_back(data_->var_index(g.nodes()[static_cast<std::size_t>(p)]));
        sum += local(var, std::move(parents));
    }
    return sum;
}

}  // namespace bnw
