#include "bnw/bayesnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bnw {

namespace {

std::string fmt_prob(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& t : out) {
        std::size_t b = t.find_first_not_of(" \t");
        std::size_t e = t.find_last_not_of(" \t");
        t = b == std::string::npos ? "" : t.substr(b, e - b + 1);
    }
    return out;
}

}  // namespace

DiscreteBn::DiscreteBn(Dag structure, std::vector<VariableSpec> variables, std::vector<Cpt> cpts)
    : graph_(std::move(structure)), variables_(std::move(variables)), cpts_(std::move(cpts)) {
    if (graph_.node_count() != variables_.size() || variables_.size() != cpts_.size())
        throw DataError("network structure, variables and tables disagree in size");
    for (std::size_t v = 0; v < variables_.size(); ++v) {
        if (graph_.nodes()[v] != variables_[v].name)
            throw DataError("network node order does not match variable order");
        variables_[v].validate();
    }
    validate();
}

void DiscreteBn::validate() const {
    for (std::size_t v = 0; v < cpts_.size(); ++v) {
        const Cpt& t = cpts_[v];
        const std::size_t r = static_cast<std::size_t>(variables_[v].cardinality());
        std::size_t q = 1;
        for (int p : t.parents) q *= static_cast<std::size_t>(variables_[static_cast<std::size_t>(p)].cardinality());
        if (t.probs.size() != q * r)
            throw DataError("table size mismatch for '" + variables_[v].name + "'");
        for (std::size_t j = 0; j < q; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < r; ++k) {
                double p = t.probs[j * r + k];
                if (p < 0.0) throw DataError("negative probability for '" + variables_[v].name + "'");
                sum += p;
            }
            if (std::fabs(sum - 1.0) > 1e-12)
                throw DataError("probabilities for '" + variables_[v].name +
                                "' do not sum to 1");
        }
    }
}

DiscreteBn fit_cpts(const Dag& g, const Dataset& data, double pseudo_count) {
    if (pseudo_count < 0.0) throw DataError("pseudo_count must be >= 0");

    std::vector<VariableSpec> vars;
    std::vector<int> data_id(g.node_count());
    vars.reserve(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        data_id[v] = data.var_index(g.nodes()[v]);
        vars.push_back(data.variable(static_cast<std::size_t>(data_id[v])));
    }

    std::vector<Cpt> cpts(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        Cpt& t = cpts[v];
        t.parents = g.parents(static_cast<int>(v));  // sorted node indices

        std::vector<int> ids;
        ids.reserve(t.parents.size() + 1);
        for (int p : t.parents) ids.push_back(data_id[static_cast<std::size_t>(p)]);
        ids.push_back(data_id[v]);
        ContingencyTable tab = counts(data, ids);

        const std::size_t r = static_cast<std::size_t>(vars[v].cardinality());
        const std::size_t q = tab.cells.size() / r;
        t.probs.resize(q * r);
        for (std::size_t j = 0; j < q; ++j) {
            double nj = 0.0;
            for (std::size_t k = 0; k < r; ++k) nj += static_cast<double>(tab.cells[j * r + k]);
            const double denom = nj + pseudo_count * static_cast<double>(r);
            if (denom == 0.0) {
                for (std::size_t k = 0; k < r; ++k)
                    t.probs[j * r + k] = 1.0 / static_cast<double>(r);
            } else {
                for (std::size_t k = 0; k < r; ++k)
                    t.probs[j * r + k] =
                        (static_cast<double>(tab.cells[j * r + k]) + pseudo_count) / denom;
            }
        }
    }
    return DiscreteBn(g, std::move(vars), std::move(cpts));
}

Dataset forward_sample(const DiscreteBn& bn, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DataError("forward_sample: need n >= 1");

    const std::size_t nv = bn.node_count();
    const std::vector<int> order = bn.graph().topological_order();
    std::vector<std::int32_t> cells(n * nv);

    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, "sample-row", i));
        std::int32_t* row = cells.data() + i * nv;
        for (int v : order) {
            const Cpt& t = bn.cpt(v);
            std::size_t cfg = 0;
            for (int p : t.parents)
                cfg = cfg * static_cast<std::size_t>(
                                bn.variable(p).cardinality()) +
                      static_cast<std::size_t>(row[p]);
            const std::size_t r = static_cast<std::size_t>(bn.variable(v).cardinality());
            const double* probs = t.probs.data() + cfg * r;
            const double u = uniform01(rng);
            double cum = 0.0;
            std::size_t pick = r - 1;
            for (std::size_t k = 0; k < r; ++k) {
                cum += probs[k];
                if (u < cum) {
                    pick = k;
                    break;
                }
            }
            row[v] = static_cast<std::int32_t>(pick);
        }
    }
    return Dataset(bn.variables(), std::move(cells));
}

std::string bn_to_text(const DiscreteBn& bn) {
    std::ostringstream out;
    out << "bnw-net 1\n";
    for (std::size_t v = 0; v < bn.node_count(); ++v) {
        const VariableSpec& spec = bn.variable(static_cast<int>(v));
        out << "node " << spec.name << '\n';
        out << "role " << to_string(spec.role) << '\n';
        out << "categories ";
        for (std::size_t k = 0; k < spec.categories.size(); ++k)
            out << (k ? "," : "") << spec.categories[k];
        out << '\n';
        if (spec.scores) {
            out << "scores ";
            for (std::size_t k = 0; k < spec.scores->size(); ++k)
                out << (k ? "," : "") << fmt_prob((*spec.scores)[k]);
            out << '\n';
        }
        const Cpt& t = bn.cpt(static_cast<int>(v));
        out << "parents";
        for (int p : t.parents) out << ' ' << bn.variable(p).name;
        out << '\n';
        const std::size_t r = static_cast<std::size_t>(spec.cardinality());
        for (std::size_t j = 0; j < t.row_count(r); ++j) {
            out << "cpt";
            for (std::size_t k = 0; k < r; ++k) out << ' ' << fmt_prob(t.probs[j * r + k]);
            out << '\n';
        }
    }
    return out.str();
}

DiscreteBn bn_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || split_ws(line) != std::vector<std::string>{"bnw-net", "1"})
        throw DataError("unsupported network file: expected 'bnw-net 1' header");

    struct RawNode {
        VariableSpec spec;
        std::vector<std::string> parents;
        std::vector<double> probs;
    };
    std::vector<RawNode> raw;
    std::size_t lineno = 1;

    while (std::getline(in, line)) {
        ++lineno;
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        std::size_t sp = line.find(' ', b);
        std::string key = line.substr(b, sp == std::string::npos ? std::string::npos : sp - b);
        std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
        if (!rest.empty() && rest.back() == '\r') rest.pop_back();

        auto fail = [&](const std::string& msg) {
            throw DataError("network file line " + std::to_string(lineno) + ": " + msg);
        };

        if (key == "node") {
            if (rest.empty()) fail("missing node name");
            raw.push_back({});
            raw.back().spec.name = rest;
        } else if (raw.empty()) {
            fail("'" + key + "' before any node");
        } else if (key == "role") {
            raw.back().spec.role = parse_role(rest);
        } else if (key == "categories") {
            raw.back().spec.categories = split_commas(rest);
        } else if (key == "scores") {
            std::vector<double> s;
            for (const auto& tok : split_commas(rest)) s.push_back(std::stod(tok));
            raw.back().spec.scores = std::move(s);
        } else if (key == "parents") {
            raw.back().parents = split_ws(rest);
        } else if (key == "cpt") {
            for (const auto& tok : split_ws(rest)) raw.back().probs.push_back(std::stod(tok));
        } else {
            fail("unknown entry '" + key + "'");
        }
    }
    if (raw.empty()) throw DataError("network file declares no nodes");

    std::vector<std::string> names;
    names.reserve(raw.size());
    for (const auto& r : raw) names.push_back(r.spec.name);
    Dag g(names);

    std::vector<VariableSpec> vars;
    std::vector<Cpt> cpts;
    for (const auto& r : raw) {
        Cpt t;
        for (const auto& pname : r.parents) {
            int p = g.node_index(pname);
            t.parents.push_back(p);
            if (!g.has_arc(pname, r.spec.name) && !g.add_arc(pname, r.spec.name))
                throw DataError("network file describes a cyclic structure at " + pname +
                                " -> " + r.spec.name);
        }
        t.probs = r.probs;
        vars.push_back(r.spec);
        cpts.push_back(std::move(t));
    }
    return DiscreteBn(std::move(g), std::move(vars), std::move(cpts));
}

void save_bn(const DiscreteBn& bn, const std::string& path) {
    write_file_atomic(path, bn_to_text(bn));
}

DiscreteBn load_bn(const std::string& path) { return bn_from_text(read_file(path)); }

}  // namespace bnw
