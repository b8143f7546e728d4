#include "bnw/ensemble.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <thread>

#include "bnw/rng.hpp"
#include "bnw/score.hpp"

namespace bnw {

namespace {

enum class Family { score, constraint, hybrid };

struct AlgoSpec {
    const char* name;
    Family family;
    ScoreType score;
    BlanketMethod method;
    RestrictMethod restrict_phase;
    MaximizeMethod maximize;
};

const AlgoSpec kAlgos[] = {
    {"hc-bic", Family::score, ScoreType::bic, {}, {}, {}},
    {"hc-aic", Family::score, ScoreType::aic, {}, {}, {}},
    {"hc-k2", Family::score, ScoreType::k2, {}, {}, {}},
    {"tabu-bic", Family::score, ScoreType::bic, {}, {}, {}},
    {"tabu-aic", Family::score, ScoreType::aic, {}, {}, {}},
    {"gs", Family::constraint, {}, BlanketMethod::gs, {}, {}},
    {"iamb", Family::constraint, {}, BlanketMethod::iamb, {}, {}},
    {"fast-iamb", Family::constraint, {}, BlanketMethod::fast_iamb, {}, {}},
    {"inter-iamb", Family::constraint, {}, BlanketMethod::inter_iamb, {}, {}},
    {"mmhc-bic", Family::hybrid, ScoreType::bic, {}, RestrictMethod::mmpc, MaximizeMethod::hc},
    {"rsmax2", Family::hybrid, ScoreType::bic, {}, RestrictMethod::iamb, MaximizeMethod::tabu},
};

const AlgoSpec& algo_spec(const std::string& name) {
    for (const auto& a : kAlgos)
        if (name == a.name) return a;
    throw UsageError("unknown algorithm '" + name + "'");
}

std::string family_name(Family f) {
    switch (f) {
        case Family::score: return "score";
        case Family::constraint: return "constraint";
        case Family::hybrid: return "hybrid";
    }
    return "?";
}

std::string fmt_half(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

}  // namespace

const std::vector<std::string>& canonical_algorithms() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& a : kAlgos) out.emplace_back(a.name);
        return out;
    }();
    return names;
}

bool is_canonical_algorithm(const std::string& name) {
    const auto& all = canonical_algorithms();
    return std::find(all.begin(), all.end(), name) != all.end();
}

void SuiteConfig::validate() const {
    learner.validate();
    if (jobs < 1) throw UsageError("jobs must be >= 1");
}

SuiteEntry learn_one(const std::string& algo, const Dataset& data, const ConstraintSet& c,
                     const LearnerConfig& cfg) {
    const AlgoSpec& spec = algo_spec(algo);
    SuiteEntry entry;
    entry.algorithm = algo;

    std::ostringstream manifest;
    manifest << "algorithm: " << algo << '\n';
    manifest << "family: " << family_name(spec.family) << '\n';
    manifest << "seed: " << cfg.seed << '\n';

    try {
        if (spec.family == Family::score) {
            bool tabu = algo.rfind("tabu", 0) == 0;
            entry.dag = tabu ? tabu_search(data, spec.score, c, cfg)
                             : hill_climb(data, spec.score, c, cfg);
            entry.is_dag = true;
            manifest << "score: " << score_name(spec.score) << '\n';
            manifest << "tabu-length: " << cfg.tabu_length << '\n';
            manifest << "max-iterations: " << cfg.max_iterations << '\n';
            manifest << "restarts: " << cfg.restarts << '\n';
        } else if (spec.family == Family::constraint) {
            entry.graph = constraint_learn(data, spec.method, cfg.alpha, c, cfg.test);
            manifest << "test: " << ci_name(cfg.test) << '\n';
            manifest << "alpha: " << cfg.alpha << '\n';
        } else {
            entry.dag = hybrid_learn(data, spec.restrict_phase, spec.maximize, spec.score,
                                     cfg.alpha, c, cfg);
            entry.is_dag = true;
            manifest << "score: " << score_name(spec.score) << '\n';
            manifest << "test: " << ci_name(cfg.test) << '\n';
            manifest << "alpha: " << cfg.alpha << '\n';
        }
    } catch (const std::exception& e) {
        throw DataError("algorithm " + algo + ": " + e.what());
    }

    if (entry.is_dag) {
        entry.graph = Pdag::from_dag(entry.dag);
        manifest << "global-score: " << global_score(entry.dag, data, spec.score) << '\n';
    }

    manifest << "arcs:\n";
    for (const auto& [u, v] : entry.graph.directed_arcs())
        manifest << "  " << u << " -> " << v << '\n';
    for (const auto& [u, v] : entry.graph.undirected_edges())
        manifest << "  " << u << " - " << v << '\n';
    entry.manifest = manifest.str();
    return entry;
}

SuiteResult run_suite(const Dataset& data, const ConstraintSet& c, const SuiteConfig& cfg) {
    cfg.validate();
    c.validate();
    const auto& names = canonical_algorithms();
    SuiteResult sr;
    sr.entries.resize(names.size());

    std::vector<std::exception_ptr> errors(names.size());
    auto run_range = [&](std::size_t from, std::size_t to) {
        for (std::size_t i = from; i < to; ++i) {
            try {
                LearnerConfig lc = cfg.learner;
                lc.seed = derive_seed(cfg.seed, names[i]);
                sr.entries[i] = learn_one(names[i], data, c, lc);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const std::size_t jobs = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), names.size());
    if (jobs <= 1) {
        run_range(0, names.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (names.size() + jobs - 1) / jobs;
        for (std::size_t j = 0; j < jobs; ++j) {
            std::size_t from = j * chunk;
            std::size_t to = std::min(names.size(), from + chunk);
            if (from < to) pool.emplace_back(run_range, from, to);
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return sr;
}

double ArcOccurrenceTable::total_of(const Arc& a) const {
    for (const auto& row : rows)
        if (row.arc == a) return row.total;
    return 0.0;
}

ArcOccurrenceTable consensus_table(const SuiteResult& sr) {
    ArcOccurrenceTable t;
    std::map<Arc, std::vector<double>> scores;
    for (const auto& entry : sr.entries) t.algorithms.push_back(entry.algorithm);

    const std::size_t n_algos = sr.entries.size();
    auto row_of = [&](const Arc& a) -> std::vector<double>& {
        auto it = scores.find(a);
        if (it == scores.end()) it = scores.emplace(a, std::vector<double>(n_algos, 0.0)).first;
        return it->second;
    };

    for (std::size_t i = 0; i < n_algos; ++i) {
        const Pdag& g = sr.entries[i].graph;
        for (const auto& [u, v] : g.directed_arcs()) {
            row_of({u, v})[i] = 1.0;
            row_of({v, u})[i] = 0.5;
        }
        for (const auto& [u, v] : g.undirected_edges()) {
            row_of({u, v})[i] = 0.5;
            row_of({v, u})[i] = 0.5;
        }
    }

    for (auto& [arc, per_algo] : scores) {
        ArcOccurrenceRow row;
        row.arc = arc;
        row.scores = per_algo;
        for (double s : per_algo) row.total += s;
        t.rows.push_back(std::move(row));
    }
    std::sort(t.rows.begin(), t.rows.end(), [](const ArcOccurrenceRow& a, const ArcOccurrenceRow& b) {
        if (a.total != b.total) return a.total > b.total;
        return a.arc < b.arc;
    });
    return t;
}

RobustNetwork robust_network(const ArcOccurrenceTable& t, double threshold) {
    if (!(threshold > 0.0 && threshold <= 11.0))
        throw UsageError("robustness threshold must lie in (0, 11]");

    std::map<Arc, double> totals;
    for (const auto& row : t.rows) totals[row.arc] = row.total;

    struct Candidate {
        Arc arc;
        double total;
    };
    std::vector<Candidate> picks;
    std::vector<std::string> log;
    std::set<Arc> seen_pairs;  // normalized

    for (const auto& row : t.rows) {
        Arc norm = row.arc.first < row.arc.second
                       ? row.arc
                       : Arc{row.arc.second, row.arc.first};
        if (seen_pairs.count(norm)) continue;
        seen_pairs.insert(norm);
        const Arc fwd = norm;
        const Arc rev{norm.second, norm.first};
        const double tf = totals.count(fwd) ? totals.at(fwd) : 0.0;
        const double tr = totals.count(rev) ? totals.at(rev) : 0.0;
        if (std::max(tf, tr) < threshold) continue;
        Arc chosen = tf >= tr ? fwd : rev;
        if (tf == tr) {
            log.push_back("orientation tie for " + norm.first + " - " + norm.second +
                          " at total " + fmt_half(tf) + "; kept " + chosen.first + " -> " +
                          chosen.second);
        }
        picks.push_back({chosen, std::max(tf, tr)});
    }

    std::sort(picks.begin(), picks.end(), [](const Candidate& a, const Candidate& b) {
        if (a.total != b.total) return a.total > b.total;
        return a.arc < b.arc;
    });

    std::set<std::string> node_set;
    for (const auto& p : picks) {
        node_set.insert(p.arc.first);
        node_set.insert(p.arc.second);
    }
    RobustNetwork rn;
    rn.threshold = threshold;
    rn.graph = Dag(std::vector<std::string>(node_set.begin(), node_set.end()));
    rn.log = std::move(log);
    for (const auto& p : picks) {
        if (rn.graph.add_arc(p.arc.first, p.arc.second)) {
            rn.totals[p.arc] = p.total;
        } else {
            rn.log.push_back("arc " + p.arc.first + " -> " + p.arc.second + " (total " +
                             fmt_half(p.total) + ") dropped: closes a cycle");
        }
    }
    return rn;
}

std::pair<std::string, Dag> select_representative(const SuiteResult& sr, const RobustNetwork& rn,
                                                  const Dataset& data) {
    const std::vector<Arc> robust_arcs = rn.graph.arcs();
    int best = -1;
    std::size_t best_count = 0;
    double best_bic = 0.0;
    for (std::size_t i = 0; i < sr.entries.size(); ++i) {
        const SuiteEntry& e = sr.entries[i];
        if (!e.is_dag) continue;
        std::size_t count = 0;
        for (const auto& [u, v] : robust_arcs)
            if (e.dag.has_arc(u, v)) ++count;
        double bic = global_score(e.dag, data, ScoreType::bic);
        if (best < 0 || count > best_count ||
            (count == best_count && bic > best_bic + 1e-9)) {
            best = static_cast<int>(i);
            best_count = count;
            best_bic = bic;
        }
    }
    if (best < 0) throw DataError("suite holds no DAG-valued result");
    return {sr.entries[static_cast<std::size_t>(best)].algorithm,
            sr.entries[static_cast<std::size_t>(best)].dag};
}

StrengthMap arc_strengths(const Dataset& data, const std::string& algo, int B,
                          const ConstraintSet& c, std::uint64_t seed, int jobs) {
    if (B < 1) throw UsageError("bootstrap count must be >= 1");
    if (jobs < 1) throw UsageError("jobs must be >= 1");
    algo_spec(algo);  // validates the name
    c.validate();

    struct Slot {
        bool ok = false;
        std::vector<Arc> directed;
        std::vector<Arc> undirected;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(B));

    auto run_range = [&](std::size_t from, std::size_t to) {
        for (std::size_t b = from; b < to; ++b) {
            try {
                Dataset rep = bootstrap_resample(data, derive_seed(seed, "bootstrap", b));
                LearnerConfig lc;
                lc.seed = derive_seed(seed, "bootstrap-learn", b);
                SuiteEntry e = learn_one(algo, rep, c, lc);
                slots[b].directed = e.graph.directed_arcs();
                slots[b].undirected = e.graph.undirected_edges();
                slots[b].ok = true;
            } catch (...) {
                slots[b].ok = false;
            }
        }
    };

    const std::size_t njobs = std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                                    static_cast<std::size_t>(B));
    if (njobs <= 1) {
        run_range(0, static_cast<std::size_t>(B));
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (static_cast<std::size_t>(B) + njobs - 1) / njobs;
        for (std::size_t j = 0; j < njobs; ++j) {
            std::size_t from = j * chunk;
            std::size_t to = std::min(static_cast<std::size_t>(B), from + chunk);
            if (from < to) pool.emplace_back(run_range, from, to);
        }
        for (auto& t : pool) t.join();
    }

    StrengthMap sm;
    sm.algorithm = algo;
    sm.bootstrap = B;
    sm.seed = seed;
    std::map<Arc, double> tally;
    int ok = 0;
    for (const Slot& s : slots) {
        if (!s.ok) {
            ++sm.failures;
            continue;
        }
        ++ok;
        for (const auto& a : s.directed) tally[a] += 1.0;
        for (const auto& [u, v] : s.undirected) {
            tally[{u, v}] += 0.5;
            tally[{v, u}] += 0.5;
        }
    }
    if (ok == 0) throw DataError("all bootstrap replicates failed for algorithm " + algo);
    for (auto& [arc, count] : tally) sm.strength[arc] = count / static_cast<double>(ok);
    return sm;
}

std::string consensus_to_csv(const ArcOccurrenceTable& t) {
    std::ostringstream out;
    out << "from,to";
    for (const auto& a : t.algorithms) out << ',' << a;
    out << ",total\n";
    for (const auto& row : t.rows) {
        out << row.arc.first << ',' << row.arc.second;
        for (double s : row.scores) out << ',' << fmt_half(s);
        out << ',' << fmt_half(row.total) << '\n';
    }
    return out.str();
}

std::string strengths_to_csv(const StrengthMap& s) {
    std::ostringstream out;
    out << "from,to,strength\n";
    char buf[48];
    for (const auto& [arc, value] : s.strength) {
        std::snprintf(buf, sizeof(buf), "%.6g", value);
        out << arc.first << ',' << arc.second << ',' << buf << '\n';
    }
    return out.str();
}

}  // namespace bnw
