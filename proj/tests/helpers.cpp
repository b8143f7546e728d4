#include "helpers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

using namespace bnw;

namespace testutil {

VariableSpec var(std::string name, std::vector<std::string> cats, VarRole role) {
    VariableSpec v;
    v.name = std::move(name);
    v.categories = std::move(cats);
    v.role = role;
    return v;
}

Dataset make_dataset(std::vector<VariableSpec> schema, const std::vector<std::vector<int>>& rows) {
    std::vector<std::int32_t> cells;
    for (const auto& r : rows)
        for (int c : r) cells.push_back(static_cast<std::int32_t>(c));
    return Dataset(std::move(schema), std::move(cells));
}

Dataset noise_dataset(std::size_t n, int dims, std::uint64_t seed, int cats) {
    std::vector<std::string> labels;
    for (int k = 0; k < cats; ++k) labels.push_back("c" + std::to_string(k));
    std::vector<VariableSpec> schema;
    for (int d = 1; d <= dims; ++d) schema.push_back(var("d" + std::to_string(d), labels));
    schema.push_back(var("t", labels, VarRole::target));

    Rng rng(seed);
    std::vector<std::int32_t> cells(n * schema.size());
    for (auto& c : cells) c = static_cast<std::int32_t>(uniform_index(rng, cats));
    return Dataset(std::move(schema), std::move(cells));
}

Dataset coupled_noise(std::size_t n, std::uint64_t seed) {
    std::vector<VariableSpec> schema = {var("x", {"0", "1"}), var("y", {"0", "1"}),
                                        var("d1", {"0", "1"}), var("t", {"0", "1"}, VarRole::target)};
    Rng rng(seed);
    std::vector<std::int32_t> cells;
    cells.reserve(n * 4);
    for (std::size_t i = 0; i < n; ++i) {
        int x = static_cast<int>(uniform_index(rng, 2));
        int y = (uniform01(rng) < 0.9) ? x : 1 - x;
        cells.push_back(x);
        cells.push_back(y);
        cells.push_back(static_cast<std::int32_t>(uniform_index(rng, 2)));
        cells.push_back(static_cast<std::int32_t>(uniform_index(rng, 2)));
    }
    return Dataset(std::move(schema), std::move(cells));
}

DiscreteBn monotone_bn(const Dag& g, double base, double span) {
    const int target = g.topological_order().back();
    std::vector<VariableSpec> specs;
    for (std::size_t v = 0; v < g.node_count(); ++v)
        specs.push_back(var(g.nodes()[v], {"no", "yes"},
                            static_cast<int>(v) == target ? VarRole::target
                                                          : VarRole::dimension));
    std::vector<Cpt> cpts;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        Cpt cpt;
        cpt.parents = g.parents(static_cast<int>(v));
        const std::size_t k = cpt.parents.size();
        if (k == 0) {
            double p = 0.3 + 0.1 * static_cast<double>(v % 4);
            cpt.probs = {1.0 - p, p};
        } else {
            double wsum = 0.0;
            for (std::size_t i = 0; i < k; ++i) wsum += static_cast<double>(2 * (k - i) - 1);
            const std::size_t q = std::size_t{1} << k;
            for (std::size_t j = 0; j < q; ++j) {
                double m = 0.0;
                std::size_t rem = j;
                for (std::size_t i = k; i-- > 0;) {  // last parent fastest
                    if (rem % 2) m += static_cast<double>(2 * (k - i) - 1);
                    rem /= 2;
                }
                double p = base + span * (m / wsum);
                cpt.probs.push_back(1.0 - p);
                cpt.probs.push_back(p);
            }
        }
        cpts.push_back(std::move(cpt));
    }
    return DiscreteBn(g, std::move(specs), std::move(cpts));
}

const Dag& benchmark_dag() {
    static const Dag g = [] {
        Dag d(std::vector<std::string>{"a", "b", "c", "d", "e", "f", "g", "h"});
        for (auto [u, v] : {std::pair{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}, {"d", "e"},
                            {"b", "f"}, {"e", "f"}, {"e", "g"}, {"f", "h"}, {"g", "h"}})
            d.add_arc(u, v);
        return d;
    }();
    return g;
}

DiscreteBn benchmark_bn() { return monotone_bn(benchmark_dag()); }

DiscreteBn chain_bn(int len) {
    std::vector<std::string> names;
    for (int i = 0; i < len; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    Dag g(names);
    for (int i = 0; i + 1 < len; ++i) g.add_arc(i, i + 1);
    return monotone_bn(g);
}

Replica survey_replica() {
    Replica r;
    r.target = "SA_LIFE";
    r.dims = {"EDU", "HEALTH", "M_MD", "M_POOR", "NATURE",
              "POL", "SOC",    "S_ECON", "S_PHYS", "WORK"};
    std::vector<std::string> nodes = r.dims;
    nodes.push_back(r.target);
    nodes.insert(nodes.end(), {"age", "gender", "country"});
    r.graph = Dag(nodes);
    const std::vector<std::pair<Arc, double>> arcs = {
        {{"age", "EDU"}, 0.97},      {{"EDU", "WORK"}, 0.93},
        {{"HEALTH", "SA_LIFE"}, 0.90}, {{"gender", "S_ECON"}, 0.88},
        {{"age", "HEALTH"}, 0.82},   {{"country", "WORK"}, 0.80},
        {{"country", "SA_LIFE"}, 0.78}, {{"M_MD", "SA_LIFE"}, 0.95},
        {{"country", "gender"}, 0.72}, {{"NATURE", "S_PHYS"}, 0.70},
        {{"country", "M_MD"}, 0.66}, {{"SA_LIFE", "NATURE"}, 0.64}};
    for (const auto& [arc, s] : arcs) {
        r.graph.add_arc(arc.first, arc.second);
        r.strengths[arc] = s;
    }
    return r;
}

const std::vector<ConsensusRow>& consensus_rows() {
    static const std::vector<ConsensusRow> rows = {
        {"age", "EDU", {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}, 11},
        {"EDU", "WORK", {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}, 11},
        {"HEALTH", "SA_LIFE", {1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 1}, 9},
        {"gender", "S_ECON", {0, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1}, 9},
        {"age", "HEALTH", {1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 0}, 8},
        {"country", "WORK", {1, 1, 1, 1, 1, 1, 0, 0, 1, 0, 1}, 8},
        {"country", "SA_LIFE", {0, 1, 1, 0, 1, 1, 1, 1, 1, 1, 0}, 8},
        {"M_MD", "SA_LIFE", {1, 1, 1, 1, 1, 0, 1, 0, 1, 0, 0}, 7},
        {"country", "gender", {1, 1, 1, 1, 1, 0.5, 0.5, 0.5, 0, 0, 0}, 6.5},
        {"NATURE", "S_PHYS", {1, 1, 1, 1, 1, 0, 0, 0.5, 0, 1, 0}, 6.5},
        {"country", "M_MD", {1, 1, 1, 1, 1, 0, 0, 0, 1, 0, 0}, 6},
        {"SA_LIFE", "NATURE", {1, 1, 1, 1, 1, 0, 0, 0, 0, 1, 0}, 6},
    };
    return rows;
}

SuiteResult suite_from_rows() {
    std::vector<std::string> nodes = {"EDU",    "HEALTH", "M_MD", "M_POOR", "NATURE",
                                      "POL",    "SOC",    "S_ECON", "S_PHYS", "WORK",
                                      "SA_LIFE", "age",   "gender", "country"};
    SuiteResult sr;
    const auto& algos = canonical_algorithms();
    for (std::size_t k = 0; k < algos.size(); ++k) {
        SuiteEntry entry;
        entry.algorithm = algos[k];
        entry.graph = Pdag(nodes);
        for (const auto& row : consensus_rows()) {
            if (row.entries[k] == 1.0)
                entry.graph.add_directed(row.from, row.to);
            else if (row.entries[k] == 0.5)
                entry.graph.add_undirected(row.from, row.to);
        }
        sr.entries.push_back(std::move(entry));
    }
    return sr;
}

const std::map<std::string, double>& external_shares() {
    static const std::map<std::string, double> shares = {
        {"EDU", 6.6},  {"HEALTH", 11.2}, {"M_MD", 9.9},   {"M_POOR", 8.8}, {"NATURE", 6.8},
        {"POL", 7.5},  {"SOC", 12.3},    {"S_ECON", 21.1}, {"S_PHYS", 4.1}, {"WORK", 11.9}};
    return shares;
}

const std::map<std::string, double>& bn_column() {
    static const std::map<std::string, double> column = {
        {"EDU", 0.0},  {"HEALTH", 46.9}, {"M_MD", 52.7}, {"M_POOR", 0.0}, {"NATURE", 0.0},
        {"POL", 0.0},  {"SOC", 0.0},     {"S_ECON", 0.4}, {"S_PHYS", 0.0}, {"WORK", 0.0}};
    return column;
}

Dag random_dag(Rng& rng, int n_nodes, double arc_prob) {
    std::vector<std::string> names;
    for (int i = 0; i < n_nodes; ++i) {
        std::string s = std::to_string(i);
        names.push_back("n" + std::string(2 - std::min<std::size_t>(2, s.size()), '0') + s);
    }
    std::vector<int> order(static_cast<std::size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i) order[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[uniform_index(rng, i)]);

    Dag g(names);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            if (uniform01(rng) < arc_prob) g.add_arc(order[i], order[j]);
    return g;
}

std::map<Arc, double> random_strengths(Rng& rng, const Dag& g) {
    std::map<Arc, double> s;
    for (const auto& arc : g.arcs()) s[arc] = uniform01(rng);
    return s;
}

std::vector<std::vector<std::string>> oracle_paths(const Dag& g, const std::string& from,
                                                   const std::string& to) {
    const int src = g.node_index(from), dst = g.node_index(to);
    std::vector<std::vector<std::string>> found;
    if (src == dst) return found;

    // explicit stack of (node, next child position) frames
    std::vector<std::pair<int, std::size_t>> stack{{src, 0}};
    std::vector<char> on_path(g.node_count(), 0);
    on_path[static_cast<std::size_t>(src)] = 1;
    while (!stack.empty()) {
        auto& [node, pos] = stack.back();
        const auto& kids = g.children(node);
        if (node == dst || pos >= kids.size()) {
            if (node == dst) {
                std::vector<std::string> names;
                for (const auto& [n, p] : stack) names.push_back(g.nodes()[static_cast<std::size_t>(n)]);
                found.push_back(std::move(names));
            }
            on_path[static_cast<std::size_t>(node)] = 0;
            stack.pop_back();
            continue;
        }
        int next = kids[pos++];
        if (!on_path[static_cast<std::size_t>(next)]) {
            on_path[static_cast<std::size_t>(next)] = 1;
            stack.push_back({next, 0});
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

std::map<std::string, double> oracle_bn_raw(const Dag& g, const std::map<Arc, double>& strengths,
                                            const std::string& target,
                                            const std::vector<std::string>& dims) {
    std::map<std::string, double> raw;
    for (const auto& dim : dims) {
        double w = 0.0;
        if (g.has_node(dim)) {
            for (const auto& path : oracle_paths(g, dim, target)) {
                double sigma = 1.0;
                for (std::size_t i = 0; i + 1 < path.size(); ++i)
                    sigma *= strengths.at({path[i], path[i + 1]});
                w += std::pow(sigma, static_cast<double>(path.size() - 1));
            }
        }
        raw[dim] = w;
    }
    return raw;
}

namespace {

bool orientation_acyclic(int n, const std::vector<std::pair<int, int>>& arcs) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    std::vector<int> indeg(static_cast<std::size_t>(n), 0);
    for (auto [u, v] : arcs) {
        out[static_cast<std::size_t>(u)].push_back(v);
        ++indeg[static_cast<std::size_t>(v)];
    }
    std::vector<int> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    int seen = 0;
    while (!ready.empty()) {
        int v = ready.back();
        ready.pop_back();
        ++seen;
        for (int w : out[static_cast<std::size_t>(v)])
            if (--indeg[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
    }
    return seen == n;
}

std::set<std::tuple<int, int, int>> v_structures(const std::vector<std::pair<int, int>>& arcs) {
    std::set<std::pair<int, int>> arcset(arcs.begin(), arcs.end());
    auto adjacent = [&](int a, int b) {
        return arcset.count({a, b}) > 0 || arcset.count({b, a}) > 0;
    };
    std::map<int, std::vector<int>> parents;
    for (auto [u, v] : arcs) parents[v].push_back(u);
    std::set<std::tuple<int, int, int>> vs;
    for (const auto& [child, ps] : parents)
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j)
                if (!adjacent(ps[i], ps[j]))
                    vs.insert({std::min(ps[i], ps[j]), std::max(ps[i], ps[j]), child});
    return vs;
}

}  // namespace

Pdag oracle_cpdag(const Dag& g) {
    std::vector<std::pair<int, int>> base;
    for (const auto& arc : g.arcs())
        base.push_back({g.node_index(arc.first), g.node_index(arc.second)});
    const std::size_t e = base.size();
    if (e > 20) throw std::runtime_error("oracle_cpdag: too many edges to enumerate");

    const auto truth_vs = v_structures(base);
    const int n = static_cast<int>(g.node_count());
    std::vector<char> always_forward(e, 1), always_backward(e, 1);
    std::size_t members = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << e); ++mask) {
        std::vector<std::pair<int, int>> arcs;
        for (std::size_t i = 0; i < e; ++i)
            arcs.push_back((mask >> i) & 1 ? std::pair{base[i].second, base[i].first} : base[i]);
        if (!orientation_acyclic(n, arcs)) continue;
        if (v_structures(arcs) != truth_vs) continue;
        ++members;
        for (std::size_t i = 0; i < e; ++i) {
            if ((mask >> i) & 1)
                always_forward[i] = 0;
            else
                always_backward[i] = 0;
        }
    }
    if (members == 0) throw std::runtime_error("oracle_cpdag: no class members found");

    Pdag out(g.nodes());
    for (std::size_t i = 0; i < e; ++i) {
        if (always_forward[i])
            out.add_directed(base[i].first, base[i].second);
        else if (always_backward[i])
            out.add_directed(base[i].second, base[i].first);
        else
            out.add_undirected(base[i].first, base[i].second);
    }
    return out;
}

double chi2_sf_oracle(double x, double k) {
    const double log_norm = -(k / 2.0) * std::log(2.0) - std::lgamma(k / 2.0);
    auto pdf = [&](double t) {
        if (t <= 0.0) return 0.0;
        return std::exp((k / 2.0 - 1.0) * std::log(t) - t / 2.0 + log_norm);
    };
    const double upper = x + 60.0 + 20.0 * k + 60.0 * std::sqrt(2.0 * k);
    const std::size_t steps = 400000;  // Simpson needs an even count
    const double h = (upper - x) / static_cast<double>(steps);
    double sum = pdf(x) + pdf(upper);
    for (std::size_t i = 1; i < steps; ++i)
        sum += pdf(x + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double ks_uniform(std::vector<double> pvals) {
    std::sort(pvals.begin(), pvals.end());
    const double n = static_cast<double>(pvals.size());
    double d = 0.0;
    for (std::size_t i = 0; i < pvals.size(); ++i) {
        d = std::max(d, (static_cast<double>(i) + 1.0) / n - pvals[i]);
        d = std::max(d, pvals[i] - static_cast<double>(i) / n);
    }
    return d;
}

TempDir::TempDir(const std::string& tag) {
    dir_ = std::filesystem::current_path() / ("tmp-" + tag);
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
}

std::string TempDir::file(const std::string& name) const { return (dir_ / name).string(); }

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string schema_text(const std::vector<VariableSpec>& schema) {
    std::ostringstream out;
    for (const auto& v : schema) {
        out << "variable: " << v.name << "\n";
        out << "role: " << to_string(v.role) << "\n";
        out << "categories: ";
        for (std::size_t k = 0; k < v.categories.size(); ++k)
            out << (k ? "," : "") << v.categories[k];
        out << "\n";
        if (v.scores) {
            out << "scores: ";
            for (std::size_t k = 0; k < v.scores->size(); ++k)
                out << (k ? "," : "") << (*v.scores)[k];
            out << "\n";
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace testutil
