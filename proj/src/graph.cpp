#include "bnw/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace bnw {

namespace {

void insert_sorted(std::vector<int>& v, int x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

void erase_sorted(std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) v.erase(it);
}

bool contains_sorted(const std::vector<int>& v, int x) {
    return std::binary_search(v.begin(), v.end(), x);
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

}  // namespace

Dag::Dag(std::vector<std::string> nodes) : nodes_(std::move(nodes)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!index_.emplace(nodes_[i], static_cast<int>(i)).second)
            throw DataError("duplicate node '" + nodes_[i] + "'");
    }
    parents_.resize(nodes_.size());
    children_.resize(nodes_.size());
}

int Dag::node_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw DataError("unknown node '" + name + "'");
    return it->second;
}

bool Dag::has_node(const std::string& name) const { return index_.count(name) > 0; }

bool Dag::has_arc(int u, int v) const {
    return contains_sorted(children_[static_cast<std::size_t>(u)], v);
}

bool Dag::has_arc(const std::string& u, const std::string& v) const {
    auto iu = index_.find(u);
    auto iv = index_.find(v);
    if (iu == index_.end() || iv == index_.end()) return false;
    return has_arc(iu->second, iv->second);
}

bool Dag::creates_cycle(int u, int v) const {
    if (u == v) return true;
    // Adding u->v closes a cycle iff v already reaches u.
    std::vector<int> stack{v};
    std::vector<bool> seen(nodes_.size(), false);
    seen[static_cast<std::size_t>(v)] = true;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (x == u) return true;
        for (int c : children_[static_cast<std::size_t>(x)])
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = true;
                stack.push_back(c);
            }
    }
    return false;
}

bool Dag::add_arc(int u, int v) {
    if (u == v || has_arc(u, v) || creates_cycle(u, v)) return false;
    insert_sorted(children_[static_cast<std::size_t>(u)], v);
    insert_sorted(parents_[static_cast<std::size_t>(v)], u);
    ++n_arcs_;
    return true;
}

bool Dag::add_arc(const std::string& u, const std::string& v) {
    return add_arc(node_index(u), node_index(v));
}

bool Dag::remove_arc(int u, int v) {
    if (!has_arc(u, v)) return false;
    erase_sorted(children_[static_cast<std::size_t>(u)], v);
    erase_sorted(parents_[static_cast<std::size_t>(v)], u);
    --n_arcs_;
    return true;
}

bool Dag::remove_arc(const std::string& u, const std::string& v) {
    return remove_arc(node_index(u), node_index(v));
}

bool Dag::reverse_arc(int u, int v) {
    if (!has_arc(u, v)) return false;
    remove_arc(u, v);
    if (creates_cycle(v, u)) {
        add_arc(u, v);  // restore
        return false;
    }
    add_arc(v, u);
    return true;
}

std::vector<Arc> Dag::arcs() const {
    std::vector<Arc> out;
    out.reserve(n_arcs_);
    for (std::size_t u = 0; u < nodes_.size(); ++u)
        for (int v : children_[u]) out.emplace_back(nodes_[u], nodes_[static_cast<std::size_t>(v)]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> Dag::topological_order() const {
    std::vector<int> indeg(nodes_.size());
    for (std::size_t v = 0; v < nodes_.size(); ++v)
        indeg[v] = static_cast<int>(parents_[v].size());
    std::vector<int> ready, order;
    for (std::size_t v = 0; v < nodes_.size(); ++v)
        if (indeg[v] == 0) ready.push_back(static_cast<int>(v));
    while (!ready.empty()) {
        int x = ready.front();
        ready.erase(ready.begin());
        order.push_back(x);
        for (int c : children_[static_cast<std::size_t>(x)])
            if (--indeg[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
    }
    return order;
}

Pdag::Pdag(std::vector<std::string> nodes) : nodes_(std::move(nodes)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!index_.emplace(nodes_[i], static_cast<int>(i)).second)
            throw DataError("duplicate node '" + nodes_[i] + "'");
    }
}

int Pdag::node_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw DataError("unknown node '" + name + "'");
    return it->second;
}

bool Pdag::has_node(const std::string& name) const { return index_.count(name) > 0; }

bool Pdag::has_directed(int u, int v) const { return directed_.count({u, v}) > 0; }

bool Pdag::has_directed(const std::string& u, const std::string& v) const {
    auto iu = index_.find(u);
    auto iv = index_.find(v);
    if (iu == index_.end() || iv == index_.end()) return false;
    return has_directed(iu->second, iv->second);
}

bool Pdag::has_undirected(int u, int v) const {
    return undirected_.count({std::min(u, v), std::max(u, v)}) > 0;
}

bool Pdag::has_undirected(const std::string& u, const std::string& v) const {
    auto iu = index_.find(u);
    auto iv = index_.find(v);
    if (iu == index_.end() || iv == index_.end()) return false;
    return has_undirected(iu->second, iv->second);
}

bool Pdag::adjacent(int u, int v) const {
    return has_directed(u, v) || has_directed(v, u) || has_undirected(u, v);
}

bool Pdag::directed_creates_cycle(int u, int v) const {
    if (u == v) return true;
    std::vector<int> stack{v};
    std::vector<bool> seen(nodes_.size(), false);
    seen[static_cast<std::size_t>(v)] = true;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (x == u) return true;
        for (const auto& a : directed_)
            if (a.first == x && !seen[static_cast<std::size_t>(a.second)]) {
                seen[static_cast<std::size_t>(a.second)] = true;
                stack.push_back(a.second);
            }
    }
    return false;
}

bool Pdag::add_directed(int u, int v) {
    if (u == v || adjacent(u, v) || directed_creates_cycle(u, v)) return false;
    directed_.insert({u, v});
    return true;
}

bool Pdag::add_directed(const std::string& u, const std::string& v) {
    return add_directed(node_index(u), node_index(v));
}

bool Pdag::add_undirected(int u, int v) {
    if (u == v || adjacent(u, v)) return false;
    undirected_.insert({std::min(u, v), std::max(u, v)});
    return true;
}

bool Pdag::add_undirected(const std::string& u, const std::string& v) {
    return add_undirected(node_index(u), node_index(v));
}

bool Pdag::remove_edge(int u, int v) {
    if (directed_.erase({u, v}) > 0) return true;
    return undirected_.erase({std::min(u, v), std::max(u, v)}) > 0;
}

bool Pdag::orient(int u, int v) {
    if (!has_undirected(u, v)) return false;
    if (directed_creates_cycle(u, v)) return false;
    undirected_.erase({std::min(u, v), std::max(u, v)});
    directed_.insert({u, v});
    return true;
}

std::vector<int> Pdag::parents(int v) const {
    std::vector<int> out;
    for (const auto& a : directed_)
        if (a.second == v) out.push_back(a.first);
    return out;
}

std::vector<int> Pdag::children(int u) const {
    std::vector<int> out;
    for (const auto& a : directed_)
        if (a.first == u) out.push_back(a.second);
    return out;
}

std::vector<int> Pdag::neighbours(int v) const {
    std::vector<int> out;
    for (std::size_t u = 0; u < nodes_.size(); ++u)
        if (static_cast<int>(u) != v && adjacent(static_cast<int>(u), v))
            out.push_back(static_cast<int>(u));
    return out;
}

std::vector<Arc> Pdag::directed_arcs() const {
    std::vector<Arc> out;
    for (const auto& a : directed_)
        out.emplace_back(nodes_[static_cast<std::size_t>(a.first)],
                         nodes_[static_cast<std::size_t>(a.second)]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Arc> Pdag::undirected_edges() const {
    std::vector<Arc> out;
    for (const auto& e : undirected_) {
        std::string a = nodes_[static_cast<std::size_t>(e.first)];
        std::string b = nodes_[static_cast<std::size_t>(e.second)];
        if (b < a) std::swap(a, b);
        out.emplace_back(std::move(a), std::move(b));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t Pdag::edge_count() const { return directed_.size() + undirected_.size(); }

Pdag Pdag::from_dag(const Dag& g) {
    Pdag p(g.nodes());
    for (const auto& [u, v] : g.arcs()) p.add_directed(p.node_index(u), p.node_index(v));
    return p;
}

void ConstraintSet::validate() const {
    for (const auto& a : whitelist) {
        if (blacklist.count(a))
            throw DataError("arc " + a.first + " -> " + a.second +
                            " is both whitelisted and blacklisted");
        if (a.first == a.second)
            throw DataError("whitelist self-loop on '" + a.first + "'");
    }
    // Whitelisted arcs alone must form a DAG.
    std::vector<std::string> names;
    for (const auto& a : whitelist) {
        names.push_back(a.first);
        names.push_back(a.second);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    Dag g(names);
    for (const auto& a : whitelist)
        if (!g.add_arc(a.first, a.second))
            throw DataError("whitelist is cyclic at arc " + a.first + " -> " + a.second);
}

ConstraintSet load_constraints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open constraints file '" + path + "'");
    ConstraintSet c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t b = line.find_first_not_of(" \t\r\n");
        if (b == std::string::npos || line[b] == '#') continue;
        std::size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw DataError("constraints line " + std::to_string(lineno) +
                            ": expected 'blacklist: FROM TO' or 'whitelist: FROM TO'");
        std::string kind = line.substr(b, colon - b);
        std::string rest = line.substr(colon + 1);
        for (std::size_t p = rest.find("->"); p != std::string::npos; p = rest.find("->", p))
            rest.replace(p, 2, "  ");
        std::replace(rest.begin(), rest.end(), ',', ' ');
        std::istringstream fields(rest);
        std::string from, to, extra;
        if (!(fields >> from >> to) || (fields >> extra))
            throw DataError("constraints line " + std::to_string(lineno) +
                            ": expected exactly two node names");
        if (kind == "blacklist")
            c.blacklist.insert({from, to});
        else if (kind == "whitelist")
            c.whitelist.insert({from, to});
        else
            throw DataError("constraints line " + std::to_string(lineno) + ": unknown prefix '" +
                            kind + "'");
    }
    c.validate();
    return c;
}

bool check_constraints(const Dag& g, const ConstraintSet& c) {
    for (const auto& a : c.blacklist)
        if (g.has_arc(a.first, a.second)) return false;
    for (const auto& a : c.whitelist)
        if (!g.has_arc(a.first, a.second)) return false;
    return true;
}

bool check_constraints(const Pdag& g, const ConstraintSet& c) {
    for (const auto& a : c.blacklist) {
        if (g.has_directed(a.first, a.second)) return false;
        // An undirected edge still admits the forbidden direction.
        if (g.has_undirected(a.first, a.second)) return false;
    }
    for (const auto& a : c.whitelist)
        if (!g.has_directed(a.first, a.second)) return false;
    return true;
}

std::vector<Path> directed_paths(const Dag& g, int from, int to) {
    const std::size_t n = g.node_count();
    if (from < 0 || to < 0 || from >= static_cast<int>(n) || to >= static_cast<int>(n))
        throw DataError("directed_paths: node index out of range");
    std::vector<Path> out;
    if (from == to) return out;
    std::vector<bool> visited(n, false);
    std::vector<int> current;

    // Children explored in node-name order so the output is ordered
    // lexicographically by name sequence.
    std::function<void(int)> dfs = [&](int x) {
        visited[static_cast<std::size_t>(x)] = true;
        current.push_back(x);
        if (x == to) {
            out.push_back(Path{current});
        } else {
            std::vector<int> kids = g.children(x);
            std::sort(kids.begin(), kids.end(), [&](int a, int b) {
                return g.nodes()[static_cast<std::size_t>(a)] <
                       g.nodes()[static_cast<std::size_t>(b)];
            });
            for (int c : kids)
                if (!visited[static_cast<std::size_t>(c)]) dfs(c);
        }
        current.pop_back();
        visited[static_cast<std::size_t>(x)] = false;
    };
    dfs(from);
    return out;
}

std::vector<Path> directed_paths(const Dag& g, const std::string& from, const std::string& to) {
    return directed_paths(g, g.node_index(from), g.node_index(to));
}

namespace {

// Meek rules. Each returns true if it oriented a->b given undirected a-b.
bool rule_applies(const Pdag& g, int a, int b) {
    const int n = static_cast<int>(g.node_count());
    // R1: c -> a, c and b nonadjacent.
    for (int c = 0; c < n; ++c)
        if (g.has_directed(c, a) && c != b && !g.adjacent(c, b)) return true;
    // R2: a -> c -> b.
    for (int c = 0; c < n; ++c)
        if (g.has_directed(a, c) && g.has_directed(c, b)) return true;
    // R3: a - c -> b and a - d -> b with c, d nonadjacent.
    for (int c = 0; c < n; ++c) {
        if (!(g.has_undirected(a, c) && g.has_directed(c, b))) continue;
        for (int d = c + 1; d < n; ++d)
            if (g.has_undirected(a, d) && g.has_directed(d, b) && !g.adjacent(c, d)) return true;
    }
    // R4: a - c, c -> d, d -> b, c and b nonadjacent.
    for (int c = 0; c < n; ++c) {
        if (!g.has_undirected(a, c) || c == b || g.adjacent(c, b)) continue;
        for (int d = 0; d < n; ++d)
            if (g.has_directed(c, d) && g.has_directed(d, b)) return true;
    }
    return false;
}

}  // namespace

void meek_closure(Pdag& g, const ConstraintSet& c, std::vector<std::string>* log) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [na, nb] : g.undirected_edges()) {
            int a = g.node_index(na);
            int b = g.node_index(nb);
            int from = -1, to = -1;
            if (rule_applies(g, a, b)) {
                from = a;
                to = b;
            } else if (rule_applies(g, b, a)) {
                from = b;
                to = a;
            }
            if (from < 0) continue;
            const std::string& f = g.nodes()[static_cast<std::size_t>(from)];
            const std::string& t = g.nodes()[static_cast<std::size_t>(to)];
            if (c.blacklisted(f, t)) {
                // Compelled direction is forbidden: take the other one, or
                // drop the edge when both ways are blocked.
                if (!c.blacklisted(t, f) && g.orient(to, from)) {
                    if (log) log->push_back("orientation " + f + " -> " + t +
                                            " blocked by blacklist; reversed");
                } else {
                    g.remove_edge(from, to);
                    if (log) log->push_back("edge " + f + " - " + t +
                                            " dropped: no orientation satisfies constraints");
                }
                changed = true;
            } else if (g.orient(from, to)) {
                changed = true;
            } else {
                // Orientation closes a directed cycle: inconsistent input.
                g.remove_edge(from, to);
                if (log) log->push_back("edge " + f + " - " + t + " dropped: orientation cycles");
                changed = true;
            }
            if (changed) break;  // restart the scan with fresh edge list
        }
    }
}

Pdag cpdag(const Dag& g) {
    Pdag p(g.nodes());
    for (const auto& [u, v] : g.arcs())
        p.add_undirected(p.node_index(u), p.node_index(v));
    // v-structures keep their directions.
    const int n = static_cast<int>(g.node_count());
    for (int v = 0; v < n; ++v) {
        const auto& pa = g.parents(v);
        for (std::size_t i = 0; i < pa.size(); ++i)
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                int u = pa[i], w = pa[j];
                if (g.has_arc(u, w) || g.has_arc(w, u)) continue;
                if (p.has_undirected(u, v)) p.orient(u, v);
                if (p.has_undirected(w, v)) p.orient(w, v);
            }
    }
    meek_closure(p);
    return p;
}

int shd(const Pdag& a, const Pdag& b) {
    std::vector<std::string> an = a.nodes();
    std::vector<std::string> bn = b.nodes();
    std::sort(an.begin(), an.end());
    std::sort(bn.begin(), bn.end());
    if (an != bn) throw DataError("shd: node sets differ");

    // 0 none, 1 undirected, 2 i->j, 3 j->i  (i, j sorted names)
    auto state = [](const Pdag& g, const std::string& i, const std::string& j) {
        if (g.has_undirected(i, j)) return 1;
        if (g.has_directed(i, j)) return 2;
        if (g.has_directed(j, i)) return 3;
        return 0;
    };
    int dist = 0;
    for (std::size_t i = 0; i < an.size(); ++i)
        for (std::size_t j = i + 1; j < an.size(); ++j)
            if (state(a, an[i], an[j]) != state(b, an[i], an[j])) ++dist;
    return dist;
}

std::string to_dot(const Dag& g, const std::map<Arc, double>* arc_labels) {
    std::ostringstream out;
    out << "digraph g {\n";
    std::vector<std::string> names = g.nodes();
    std::sort(names.begin(), names.end());
    for (const auto& n : names) out << "  \"" << n << "\";\n";
    for (const auto& a : g.arcs()) {
        out << "  \"" << a.first << "\" -> \"" << a.second << "\"";
        if (arc_labels) {
            auto it = arc_labels->find(a);
            if (it != arc_labels->end()) out << " [label=\"" << fmt_double(it->second) << "\"]";
        }
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string to_dot(const Pdag& g) {
    std::ostringstream out;
    out << "digraph g {\n";
    std::vector<std::string> names = g.nodes();
    std::sort(names.begin(), names.end());
    for (const auto& n : names) out << "  \"" << n << "\";\n";
    for (const auto& a : g.directed_arcs())
        out << "  \"" << a.first << "\" -> \"" << a.second << "\";\n";
    for (const auto& e : g.undirected_edges())
        out << "  \"" << e.first << "\" -> \"" << e.second << "\" [dir=none];\n";
    out << "}\n";
    return out.str();
}

std::string arcs_to_csv(const Dag& g, const std::map<Arc, double>* strengths) {
    std::ostringstream out;
    out << (strengths ? "from,to,strength\n" : "from,to\n");
    for (const auto& a : g.arcs()) {
        out << a.first << ',' << a.second;
        if (strengths) {
            auto it = strengths->find(a);
            out << ',' << fmt_double(it == strengths->end() ? 0.0 : it->second);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace bnw
