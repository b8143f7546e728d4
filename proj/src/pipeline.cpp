#include "bnw/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace bnw {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cur = trim(cur);
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw UsageError("config key '" + key + "': '" + s + "' is not a whole number");
    }
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw UsageError("config key '" + key + "': '" + s + "' is not a number");
    }
}

}  // namespace

std::string canonical_scheme(const std::string& name) {
    if (name == "equal" || name == "eq") return "equal";
    if (name == "bn") return "bn";
    if (name == "spearman" || name == "sc") return "spearman";
    if (name == "ols" || name == "re") return "ols";
    if (name == "rf") return "rf";
    if (name == "external" || name == "eb") return "external";
    throw UsageError("unknown scheme '" + name +
                     "' (valid: equal, bn, spearman, ols, rf, external)");
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file '" + path + "'");
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));

        if (key == "data") cfg.data_path = value;
        else if (key == "schema") cfg.schema_path = value;
        else if (key == "constraints") cfg.constraints_path = value;
        else if (key == "external-weights") cfg.external_weights_path = value;
        else if (key == "network") cfg.network_path = value;
        else if (key == "out") cfg.out_dir = value;
        else if (key == "target") cfg.target = value;
        else if (key == "group") cfg.group_var = value;
        else if (key == "baseline") cfg.baseline = canonical_scheme(value);
        else if (key == "schemes") {
            cfg.schemes.clear();
            for (const auto& s : split_list(value)) cfg.schemes.push_back(canonical_scheme(s));
        } else if (key == "algorithm") {
            if (!is_canonical_algorithm(value))
                throw UsageError("config key 'algorithm': unknown algorithm '" + value + "'");
            cfg.strength_algorithm = value;
        } else if (key == "threshold") cfg.threshold = parse_double(value, key);
        else if (key == "bootstrap") cfg.bootstrap = static_cast<int>(parse_u64(value, key));
        else if (key == "mode") cfg.mode = parse_bn_mode(value);
        else if (key == "discount") cfg.discount = parse_double(value, key);
        else if (key == "seed") cfg.seed = parse_u64(value, key);
        else if (key == "jobs") cfg.jobs = static_cast<int>(parse_u64(value, key));
        else if (key == "rows") cfg.sample_rows = parse_u64(value, key);
        else if (key == "alpha") cfg.learner.alpha = parse_double(value, key);
        else if (key == "test") cfg.learner.test = parse_ci(value);
        else if (key == "tabu-length") cfg.learner.tabu_length = static_cast<int>(parse_u64(value, key));
        else if (key == "max-iterations") cfg.learner.max_iterations = static_cast<int>(parse_u64(value, key));
        else if (key == "restarts") cfg.learner.restarts = static_cast<int>(parse_u64(value, key));
        else if (key == "trees") cfg.rf.trees = static_cast<int>(parse_u64(value, key));
        else if (key == "mtry") cfg.rf.mtry = static_cast<int>(parse_u64(value, key));
        else if (key == "min-leaf") cfg.rf.min_leaf = static_cast<int>(parse_u64(value, key));
        else throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

namespace {

Dataset load_input(const RunConfig& cfg) {
    if (cfg.schema_path.empty()) throw UsageError("no schema file given");
    if (cfg.data_path.empty()) throw UsageError("no data file given");
    return load_csv(cfg.data_path, load_schema(cfg.schema_path));
}

ConstraintSet load_input_constraints(const RunConfig& cfg) {
    if (cfg.constraints_path.empty()) return {};
    return load_constraints(cfg.constraints_path);
}

std::string resolve_target(const RunConfig& cfg, const Dataset& data) {
    const std::string schema_target =
        data.variable(static_cast<std::size_t>(data.target_var())).name;
    if (cfg.target.empty() || cfg.target == schema_target) return schema_target;
    throw UsageError("target '" + cfg.target + "' does not match the schema's target variable '" +
                     schema_target + "'");
}

struct OutputSet {
    std::vector<std::pair<std::string, std::string>> files;  // path, content

    void add(const std::filesystem::path& dir, const std::string& name,
             const std::string& content) {
        files.emplace_back((dir / name).string(), content);
    }

    // Everything is computed by now; failures before this point leave
    // nothing behind.
    std::vector<std::string> write() const {
        std::vector<std::string> written;
        for (const auto& [path, content] : files) {
            write_file_atomic(path, content);
            written.push_back(path);
        }
        return written;
    }
};

std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory '" + dir.string() + "'");
    return dir;
}

std::string fmt_total(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

std::string robust_to_csv(const RobustNetwork& rn) {
    std::ostringstream out;
    out << "from,to,total\n";
    for (const auto& arc : rn.graph.arcs())
        out << arc.first << ',' << arc.second << ',' << fmt_total(rn.totals.at(arc)) << '\n';
    return out.str();
}

}  // namespace

LearnArtifacts run_learn_pipeline(const RunConfig& cfg, const Dataset& data,
                                  const ConstraintSet& c) {
    if (!(cfg.threshold > 0.0 && cfg.threshold <= 11.0))
        throw UsageError("robustness threshold must lie in (0, 11]");
    SuiteConfig sc;
    sc.learner = cfg.learner;
    sc.seed = cfg.seed;
    sc.jobs = cfg.jobs;

    LearnArtifacts art;
    art.suite = run_suite(data, c, sc);
    art.consensus = consensus_table(art.suite);
    art.robust = robust_network(art.consensus, cfg.threshold);
    auto rep = select_representative(art.suite, art.robust, data);
    art.representative = rep.first;
    art.representative_dag = rep.second;
    return art;
}

WeightsArtifacts run_weights_pipeline(const RunConfig& cfg, const Dataset& data,
                                      const ConstraintSet& c) {
    if (cfg.bootstrap < 1) throw UsageError("bootstrap count must be >= 1");
    const std::string target = resolve_target(cfg, data);
    const std::vector<std::string> dims = data.dimension_names();

    WeightsArtifacts art;
    const bool need_bn =
        std::find(cfg.schemes.begin(), cfg.schemes.end(), "bn") != cfg.schemes.end();
    if (need_bn) {
        art.learn = run_learn_pipeline(cfg, data, c);
        art.have_learn = true;
        const std::string algo = cfg.strength_algorithm.empty() ? art.learn.representative
                                                                : cfg.strength_algorithm;
        art.strengths = arc_strengths(data, algo, cfg.bootstrap, c,
                                      derive_seed(cfg.seed, "strengths"), cfg.jobs);
        // a robust arc can be missing from the bootstrap map: that is
        // strength 0, not an error
        for (const auto& arc : art.learn.robust.graph.arcs())
            art.strengths.strength.emplace(arc, 0.0);
    }

    for (const auto& scheme : cfg.schemes) {
        if (scheme == "equal") {
            art.weights.push_back(equal_weights(dims));
        } else if (scheme == "bn") {
            art.weights.push_back(bn_weights(art.learn.robust.graph, art.strengths.strength,
                                             target, dims, cfg.mode, cfg.discount));
        } else if (scheme == "spearman") {
            art.weights.push_back(spearman_weights(data, target, dims));
        } else if (scheme == "ols") {
            art.weights.push_back(ols_weights(data, target, dims));
        } else if (scheme == "rf") {
            RfConfig rf = cfg.rf;
            rf.seed = derive_seed(cfg.seed, "rf");
            rf.jobs = cfg.jobs;
            art.weights.push_back(rf_weights(data, target, dims, rf));
        } else if (scheme == "external") {
            if (cfg.external_weights_path.empty())
                throw UsageError("scheme 'external' needs an external weights file");
            art.weights.push_back(external_weights(cfg.external_weights_path, dims));
        } else {
            throw UsageError("unknown scheme '" + scheme + "'");
        }
    }
    return art;
}

std::string weights_to_csv(const std::vector<WeightVector>& weights) {
    if (weights.empty()) throw UsageError("no weight vectors to export");
    std::vector<std::string> dims;
    for (const auto& [dim, value] : weights.front().weights) dims.push_back(dim);

    std::ostringstream out;
    out << "dimension";
    for (const auto& w : weights) out << ',' << w.scheme;
    out << '\n';
    char buf[32];
    for (const auto& dim : dims) {
        out << dim;
        for (const auto& w : weights) {
            auto it = w.weights.find(dim);
            if (it == w.weights.end())
                throw DataError("scheme '" + w.scheme + "' has no weight for '" + dim + "'");
            std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * it->second);
            out << ',' << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<std::string> cmd_learn(const RunConfig& cfg) {
    Dataset data = load_input(cfg);
    ConstraintSet c = load_input_constraints(cfg);
    LearnArtifacts art = run_learn_pipeline(cfg, data, c);

    OutputSet out;
    const auto dir = ensure_out_dir(cfg);
    for (const auto& entry : art.suite.entries) {
        out.add(dir, "manifest-" + entry.algorithm + ".txt", entry.manifest);
        out.add(dir, "graph-" + entry.algorithm + ".dot", to_dot(entry.graph));
    }
    out.add(dir, "consensus.csv", consensus_to_csv(art.consensus));
    out.add(dir, "robust.csv", robust_to_csv(art.robust));
    out.add(dir, "robust.dot", to_dot(art.robust.graph, &art.robust.totals));
    std::ostringstream rep;
    rep << "representative: " << art.representative << '\n';
    for (const auto& note : art.robust.log) rep << "note: " << note << '\n';
    out.add(dir, "representative.txt", rep.str());
    return out.write();
}

std::vector<std::string> cmd_weights(const RunConfig& cfg) {
    Dataset data = load_input(cfg);
    ConstraintSet c = load_input_constraints(cfg);
    WeightsArtifacts art = run_weights_pipeline(cfg, data, c);

    OutputSet out;
    const auto dir = ensure_out_dir(cfg);
    out.add(dir, "weights.csv", weights_to_csv(art.weights));
    if (art.have_learn) out.add(dir, "strengths.csv", strengths_to_csv(art.strengths));
    return out.write();
}

std::vector<std::string> cmd_compare(const RunConfig& cfg) {
    Dataset data = load_input(cfg);
    ConstraintSet c = load_input_constraints(cfg);
    if (cfg.group_var.empty()) throw UsageError("compare needs a group variable");
    const int gv = data.var_index(cfg.group_var);  // throws on unknown
    if (std::find(cfg.schemes.begin(), cfg.schemes.end(), cfg.baseline) == cfg.schemes.end())
        throw UsageError("baseline scheme '" + cfg.baseline + "' is not among the schemes");

    WeightsArtifacts art = run_weights_pipeline(cfg, data, c);
    ScoreMatrix scores = achievement_scores(data);

    std::vector<std::string> labels(data.n_rows());
    const VariableSpec& gspec = data.variable(static_cast<std::size_t>(gv));
    for (std::size_t i = 0; i < data.n_rows(); ++i)
        labels[i] = gspec.categories[static_cast<std::size_t>(
            data.cell(i, static_cast<std::size_t>(gv)))];

    std::vector<RankTable> tables;
    for (const auto& w : art.weights)
        tables.push_back(group_rankings(composite_index(scores, w), labels));
    RankShiftReport report = rank_shift_report(tables, cfg.baseline);

    OutputSet out;
    const auto dir = ensure_out_dir(cfg);
    out.add(dir, "weights.csv", weights_to_csv(art.weights));
    out.add(dir, "ranks.csv", ranks_to_csv(tables));
    out.add(dir, "shifts.csv", shift_report_to_csv(report));
    out.add(dir, "bump.csv", bump_chart_csv(tables));
    return out.write();
}

std::vector<std::string> cmd_simulate(const RunConfig& cfg) {
    if (cfg.network_path.empty()) throw UsageError("simulate needs a network file");
    if (cfg.sample_rows < 1) throw UsageError("simulate needs a positive row count");
    DiscreteBn bn = load_bn(cfg.network_path);
    Dataset sample = forward_sample(bn, cfg.sample_rows, cfg.seed);

    OutputSet out;
    const auto dir = ensure_out_dir(cfg);
    out.add(dir, "sample.csv", to_csv(sample));
    return out.write();
}

std::vector<std::string> cmd_strength(const RunConfig& cfg) {
    if (cfg.bootstrap < 1) throw UsageError("bootstrap count must be >= 1");
    Dataset data = load_input(cfg);
    ConstraintSet c = load_input_constraints(cfg);

    std::string algo = cfg.strength_algorithm;
    std::map<Arc, double> robust_labels;
    bool have_robust = false;
    RobustNetwork robust;
    if (algo.empty()) {
        LearnArtifacts art = run_learn_pipeline(cfg, data, c);
        algo = art.representative;
        robust = art.robust;
        have_robust = true;
    }
    StrengthMap sm =
        arc_strengths(data, algo, cfg.bootstrap, c, derive_seed(cfg.seed, "strengths"), cfg.jobs);

    OutputSet out;
    const auto dir = ensure_out_dir(cfg);
    out.add(dir, "strengths.csv", strengths_to_csv(sm));
    if (have_robust) {
        for (const auto& arc : robust.graph.arcs()) {
            auto it = sm.strength.find(arc);
            robust_labels[arc] = it == sm.strength.end() ? 0.0 : it->second;
        }
        out.add(dir, "strengths.dot", to_dot(robust.graph, &robust_labels));
    }
    return out.write();
}

}  // namespace bnw
