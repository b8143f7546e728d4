#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bnw/common.hpp"

namespace bnw {

using Arc = std::pair<std::string, std::string>;

// Directed acyclic graph over named variables. Mutations that would break
// acyclicity (or add self-loops/duplicates) are rejected and leave the
// graph unchanged.
class Dag {
public:
    Dag() = default;
    explicit Dag(std::vector<std::string> nodes);

    const std::vector<std::string>& nodes() const { return nodes_; }
    std::size_t node_count() const { return nodes_.size(); }
    int node_index(const std::string& name) const;  // throws DataError if unknown
    bool has_node(const std::string& name) const;

    bool has_arc(int u, int v) const;
    bool has_arc(const std::string& u, const std::string& v) const;
    bool add_arc(int u, int v);
    bool add_arc(const std::string& u, const std::string& v);
    bool remove_arc(int u, int v);
    bool remove_arc(const std::string& u, const std::string& v);
    bool reverse_arc(int u, int v);
    // True if adding u->v would close a directed cycle.
    bool creates_cycle(int u, int v) const;

    const std::vector<int>& parents(int v) const { return parents_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& children(int u) const { return children_[static_cast<std::size_t>(u)]; }
    std::vector<Arc> arcs() const;  // sorted by (from, to) name
    std::size_t arc_count() const { return n_arcs_; }
    std::vector<int> topological_order() const;

private:
    std::vector<std::string> nodes_;
    std::map<std::string, int> index_;
    std::vector<std::vector<int>> parents_;   // sorted
    std::vector<std::vector<int>> children_;  // sorted
    std::size_t n_arcs_ = 0;
};

// Partially directed graph: directed part kept acyclic, an edge is never
// both directed and undirected.
class Pdag {
public:
    Pdag() = default;
    explicit Pdag(std::vector<std::string> nodes);

    const std::vector<std::string>& nodes() const { return nodes_; }
    std::size_t node_count() const { return nodes_.size(); }
    int node_index(const std::string& name) const;
    bool has_node(const std::string& name) const;

    bool add_directed(int u, int v);
    bool add_directed(const std::string& u, const std::string& v);
    bool add_undirected(int u, int v);
    bool add_undirected(const std::string& u, const std::string& v);
    bool remove_edge(int u, int v);  // removes directed u->v or the undirected edge
    // Turn undirected u-v into directed u->v; rejected if it closes a cycle.
    bool orient(int u, int v);
    bool directed_creates_cycle(int u, int v) const;

    bool has_directed(int u, int v) const;
    bool has_directed(const std::string& u, const std::string& v) const;
    bool has_undirected(int u, int v) const;
    bool has_undirected(const std::string& u, const std::string& v) const;
    bool adjacent(int u, int v) const;

    std::vector<int> parents(int v) const;
    std::vector<int> children(int u) const;
    std::vector<int> neighbours(int v) const;  // all adjacent nodes
    std::vector<Arc> directed_arcs() const;
    std::vector<Arc> undirected_edges() const;  // normalized, from < to
    std::size_t edge_count() const;

    static Pdag from_dag(const Dag& g);

private:
    std::vector<std::string> nodes_;
    std::map<std::string, int> index_;
    std::set<std::pair<int, int>> directed_;
    std::set<std::pair<int, int>> undirected_;  // stored with first < second
};

// Forbidden and required arcs for structure learning.
struct ConstraintSet {
    std::set<Arc> blacklist;
    std::set<Arc> whitelist;

    bool blacklisted(const std::string& u, const std::string& v) const {
        return blacklist.count({u, v}) > 0;
    }
    bool whitelisted(const std::string& u, const std::string& v) const {
        return whitelist.count({u, v}) > 0;
    }
    // Both directions blacklisted: the pair may not be adjacent at all.
    bool edge_forbidden(const std::string& u, const std::string& v) const {
        return blacklisted(u, v) && blacklisted(v, u);
    }
    bool whitelist_adjacent(const std::string& u, const std::string& v) const {
        return whitelisted(u, v) || whitelisted(v, u);
    }
    void validate() const;
};

ConstraintSet load_constraints(const std::string& path);

bool check_constraints(const Dag& g, const ConstraintSet& c);
bool check_constraints(const Pdag& g, const ConstraintSet& c);

// A node-simple direction-respecting path, stored as its node sequence.
struct Path {
    std::vector<int> nodes;
    std::size_t length() const { return nodes.size() - 1; }  // arc count
};

// All simple directed paths from `from` to `to`, ordered lexicographically
// by node-name sequence. Empty when none exist (or from == to).
std::vector<Path> directed_paths(const Dag& g, const std::string& from, const std::string& to);
std::vector<Path> directed_paths(const Dag& g, int from, int to);

// Completed PDAG of g's Markov equivalence class.
Pdag cpdag(const Dag& g);

// Orientation closure under the four Meek rules. Orientations that a
// blacklist forbids are flipped when possible; edges whose only legal
// orientation closes a cycle are dropped (logged).
void meek_closure(Pdag& g, const ConstraintSet& c = {}, std::vector<std::string>* log = nullptr);

// Structural Hamming distance between PDAGs with identical node sets.
int shd(const Pdag& a, const Pdag& b);

std::string to_dot(const Dag& g, const std::map<Arc, double>* arc_labels = nullptr);
std::string to_dot(const Pdag& g);
std::string arcs_to_csv(const Dag& g, const std::map<Arc, double>* strengths = nullptr);

}  // namespace bnw
