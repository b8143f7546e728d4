#include "bnw/learn.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <tuple>

#include "bnw/rng.hpp"

namespace bnw {

void LearnerConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
    if (tabu_length < 1) throw UsageError("tabu length must be >= 1");
    if (max_iterations < 0) throw UsageError("max iterations must be >= 0");
    if (restarts < 0) throw UsageError("restarts must be >= 0");
}

BlanketMethod parse_blanket_method(const std::string& name) {
    if (name == "gs") return BlanketMethod::gs;
    if (name == "iamb") return BlanketMethod::iamb;
    if (name == "fast-iamb") return BlanketMethod::fast_iamb;
    if (name == "inter-iamb") return BlanketMethod::inter_iamb;
    throw UsageError("unknown blanket method '" + name + "'");
}

namespace {

constexpr double kEps = 1e-10;

// ---------------------------------------------------------------- subsets

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - (k - i)) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// Subsets of pool by ascending size, lexicographic within a size. Stops and
// returns true as soon as fn returns true.
template <typename Fn>
bool for_subsets(const std::vector<int>& pool, Fn fn) {
    for (std::size_t s = 0; s <= pool.size(); ++s) {
        std::vector<std::size_t> idx(s);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        for (;;) {
            std::vector<int> subset(s);
            for (std::size_t i = 0; i < s; ++i) subset[i] = pool[idx[i]];
            if (fn(subset)) return true;
            if (s == 0 || !next_combination(idx, pool.size())) break;
        }
    }
    return false;
}

// ---------------------------------------------------------------- search

enum class MoveKind { add = 0, del = 1, rev = 2 };

struct Move {
    MoveKind kind;
    int u, v;
    double delta;
};

using MoveKey = std::tuple<int, int, int>;

MoveKey move_key(MoveKind k, int u, int v) { return {static_cast<int>(k), u, v}; }

MoveKey inverse_key(const Move& m) {
    switch (m.kind) {
        case MoveKind::add: return move_key(MoveKind::del, m.u, m.v);
        case MoveKind::del: return move_key(MoveKind::add, m.u, m.v);
        case MoveKind::rev: return move_key(MoveKind::rev, m.v, m.u);
    }
    return {};
}

struct SearchContext {
    const Dataset& data;
    const Scorer& scorer;
    const ConstraintSet& c;
    // Normalized var-id pairs reachable by add moves; nullptr = unrestricted.
    const std::set<std::pair<int, int>>* allowed;
    std::vector<int> name_order;  // var ids sorted by variable name
};

bool pair_allowed(const SearchContext& ctx, int u, int v) {
    if (!ctx.allowed) return true;
    const auto& su = ctx.data.variable(static_cast<std::size_t>(u)).name;
    const auto& sv = ctx.data.variable(static_cast<std::size_t>(v)).name;
    if (ctx.c.whitelist_adjacent(su, sv)) return true;
    return ctx.allowed->count({std::min(u, v), std::max(u, v)}) > 0;
}

// Directed path from `from` to `to` that avoids the direct arc from->to;
// its existence means reversing that arc would close a cycle.
bool path_avoiding_arc(const Dag& g, int from, int to) {
    std::vector<int> stack{from};
    std::vector<bool> seen(g.node_count(), false);
    seen[static_cast<std::size_t>(from)] = true;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int ch : g.children(x)) {
            if (x == from && ch == to) continue;
            if (ch == to) return true;
            if (!seen[static_cast<std::size_t>(ch)]) {
                seen[static_cast<std::size_t>(ch)] = true;
                stack.push_back(ch);
            }
        }
    }
    return false;
}

std::vector<int> without(const std::vector<int>& xs, int drop) {
    std::vector<int> out;
    out.reserve(xs.size());
    for (int x : xs)
        if (x != drop) out.push_back(x);
    return out;
}

std::optional<Move> best_move(const SearchContext& ctx, const Dag& g,
                              const std::set<MoveKey>* tabu) {
    std::optional<Move> best;
    auto consider = [&](MoveKind k, int u, int v, double delta) {
        if (tabu && tabu->count(move_key(k, u, v))) return;
        if (!best || delta > best->delta) best = Move{k, u, v, delta};
    };

    for (int u : ctx.name_order) {
        const auto& su = ctx.data.variable(static_cast<std::size_t>(u)).name;
        for (int v : ctx.name_order) {
            if (u == v || g.has_arc(u, v) || g.has_arc(v, u)) continue;
            const auto& sv = ctx.data.variable(static_cast<std::size_t>(v)).name;
            if (ctx.c.blacklisted(su, sv)) continue;
            if (!pair_allowed(ctx, u, v)) continue;
            if (g.creates_cycle(u, v)) continue;
            std::vector<int> pa = g.parents(v);
            double before = ctx.scorer.local(v, pa);
            pa.push_back(u);
            consider(MoveKind::add, u, v, ctx.scorer.local(v, pa) - before);
        }
    }

    for (const auto& [su, sv] : g.arcs()) {
        if (ctx.c.whitelisted(su, sv)) continue;
        int u = g.node_index(su);
        int v = g.node_index(sv);
        const auto& pa = g.parents(v);
        double delta = ctx.scorer.local(v, without(pa, u)) - ctx.scorer.local(v, pa);
        consider(MoveKind::del, u, v, delta);
    }

    for (const auto& [su, sv] : g.arcs()) {
        if (ctx.c.whitelisted(su, sv) || ctx.c.blacklisted(sv, su)) continue;
        int u = g.node_index(su);
        int v = g.node_index(sv);
        if (path_avoiding_arc(g, u, v)) continue;
        const auto& pav = g.parents(v);
        double delta = ctx.scorer.local(v, without(pav, u)) - ctx.scorer.local(v, pav);
        std::vector<int> pau = g.parents(u);
        delta -= ctx.scorer.local(u, pau);
        pau.push_back(v);
        delta += ctx.scorer.local(u, pau);
        consider(MoveKind::rev, u, v, delta);
    }
    return best;
}

void apply_move(Dag& g, const Move& m) {
    switch (m.kind) {
        case MoveKind::add: g.add_arc(m.u, m.v); break;
        case MoveKind::del: g.remove_arc(m.u, m.v); break;
        case MoveKind::rev: g.reverse_arc(m.u, m.v); break;
    }
}

void climb(const SearchContext& ctx, Dag& g) {
    for (;;) {
        auto m = best_move(ctx, g, nullptr);
        if (!m || m->delta <= kEps) break;
        apply_move(g, *m);
    }
}

// Walks away from a local optimum taking the best non-tabu move, improving
// or not, for up to cfg.max_iterations consecutive non-improving steps.
void tabu_walk(const SearchContext& ctx, Dag& g, const LearnerConfig& cfg, Dag& best_graph,
               double& best_score) {
    std::deque<MoveKey> recency;
    std::set<MoveKey> tabu;
    double cur = best_score;
    int stall = 0;
    while (stall < cfg.max_iterations) {
        auto m = best_move(ctx, g, &tabu);
        if (!m) break;
        apply_move(g, *m);
        cur += m->delta;
        MoveKey key = inverse_key(*m);
        recency.push_back(key);
        tabu.insert(key);
        while (static_cast<int>(recency.size()) > cfg.tabu_length) {
            MoveKey old = recency.front();
            recency.pop_front();
            if (std::find(recency.begin(), recency.end(), old) == recency.end()) tabu.erase(old);
        }
        if (cur > best_score + kEps) {
            best_score = cur;
            best_graph = g;
            stall = 0;
        } else {
            ++stall;
        }
    }
}

Dag whitelist_graph(const Dataset& data, const ConstraintSet& c) {
    std::vector<std::string> names;
    names.reserve(data.n_vars());
    for (const auto& spec : data.schema()) names.push_back(spec.name);
    Dag g(names);
    for (const auto& [u, v] : c.whitelist) g.add_arc(u, v);
    return g;
}

Dag score_search(const Dataset& data, ScoreType st, const ConstraintSet& c,
                 const LearnerConfig& cfg, bool tabu_mode,
                 const std::set<std::pair<int, int>>* allowed) {
    cfg.validate();
    c.validate();
    Scorer scorer(data, st);
    SearchContext ctx{data, scorer, c, allowed, {}};
    ctx.name_order.resize(data.n_vars());
    for (std::size_t i = 0; i < data.n_vars(); ++i) ctx.name_order[static_cast<std::size_t>(i)] = static_cast<int>(i);
    std::sort(ctx.name_order.begin(), ctx.name_order.end(), [&](int a, int b) {
        return data.variable(static_cast<std::size_t>(a)).name <
               data.variable(static_cast<std::size_t>(b)).name;
    });

    Dag best_overall;
    double best_overall_score = -std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(data.n_vars());

    for (int k = 0; k <= cfg.restarts; ++k) {
        Dag g = whitelist_graph(data, c);
        if (k > 0) {
            Rng rng(derive_seed(cfg.seed, "restart", static_cast<std::uint64_t>(k)));
            for (int t = 0; t < n; ++t) {
                int u = static_cast<int>(uniform_index(rng, data.n_vars()));
                int v = static_cast<int>(uniform_index(rng, data.n_vars()));
                if (u == v || g.has_arc(u, v) || g.has_arc(v, u)) continue;
                const auto& su = data.variable(static_cast<std::size_t>(u)).name;
                const auto& sv = data.variable(static_cast<std::size_t>(v)).name;
                if (c.blacklisted(su, sv) || !pair_allowed(ctx, u, v)) continue;
                g.add_arc(u, v);  // refuses cycles on its own
            }
        }
        climb(ctx, g);
        Dag best_graph = g;
        double best_score = scorer.total(g);
        if (tabu_mode && cfg.max_iterations > 0) tabu_walk(ctx, g, cfg, best_graph, best_score);
        if (best_score > best_overall_score + kEps) {
            best_overall = best_graph;
            best_overall_score = best_score;
        }
    }
    return best_overall;
}

}  // namespace

Dag hill_climb(const Dataset& data, ScoreType s, const ConstraintSet& c,
               const LearnerConfig& cfg) {
    return score_search(data, s, c, cfg, false, nullptr);
}

Dag tabu_search(const Dataset& data, ScoreType s, const ConstraintSet& c,
                const LearnerConfig& cfg) {
    return score_search(data, s, c, cfg, true, nullptr);
}

Dag restricted_score_search(const Dataset& data, ScoreType s, const ConstraintSet& c,
                            const LearnerConfig& cfg, MaximizeMethod maximize,
                            const EdgeSet& allowed) {
    std::set<std::pair<int, int>> pairs;
    for (const auto& [a, b] : allowed) {
        int u = data.var_index(a);
        int v = data.var_index(b);
        pairs.insert({std::min(u, v), std::max(u, v)});
    }
    return score_search(data, s, c, cfg, maximize == MaximizeMethod::tabu, &pairs);
}

// ---------------------------------------------------------------- blankets

namespace {

struct BlanketContext {
    const Dataset& data;
    double alpha;
    CiType test;
    const ConstraintSet& c;
    int v;
    std::set<int> forced;
    std::vector<int> candidates;  // ascending var ids, forced excluded
};

BlanketContext make_blanket_context(const Dataset& data, int v, double alpha,
                                    const ConstraintSet& c, CiType test) {
    if (v < 0 || v >= static_cast<int>(data.n_vars()))
        throw DataError("markov_blanket: variable index out of range");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
    BlanketContext ctx{data, alpha, test, c, v, {}, {}};
    const auto& vname = data.variable(static_cast<std::size_t>(v)).name;
    for (int u = 0; u < static_cast<int>(data.n_vars()); ++u) {
        if (u == v) continue;
        const auto& uname = data.variable(static_cast<std::size_t>(u)).name;
        if (ctx.c.whitelist_adjacent(uname, vname))
            ctx.forced.insert(u);
        else if (!ctx.c.edge_forbidden(uname, vname))
            ctx.candidates.push_back(u);
    }
    return ctx;
}

CiResult test_given(const BlanketContext& ctx, int x, const std::set<int>& blanket) {
    std::vector<int> z;
    z.reserve(blanket.size());
    for (int b : blanket)
        if (b != x) z.push_back(b);
    return ci_test(ctx.data, ctx.v, x, z, ctx.test);
}

// Removes blanket members that test independent given the rest. Forced
// members and `keep` stay put.
void shrink(const BlanketContext& ctx, std::set<int>& blanket, int keep = -1) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> members(blanket.begin(), blanket.end());
        for (int x : members) {
            if (ctx.forced.count(x) || x == keep) continue;
            std::set<int> rest = blanket;
            rest.erase(x);
            if (test_given(ctx, x, rest).p_value > ctx.alpha) {
                blanket.erase(x);
                changed = true;
                break;
            }
        }
    }
}

// Most dependent unblanketed candidate: smallest p, then largest statistic,
// then smallest var id. Returns -1 when none tests dependent.
int best_candidate(const BlanketContext& ctx, const std::set<int>& blanket) {
    int best = -1;
    double best_p = 2.0, best_stat = -1.0;
    for (int x : ctx.candidates) {
        if (blanket.count(x)) continue;
        CiResult r = test_given(ctx, x, blanket);
        if (r.p_value > ctx.alpha) continue;
        if (best < 0 || r.p_value < best_p || (r.p_value == best_p && r.statistic > best_stat)) {
            best = x;
            best_p = r.p_value;
            best_stat = r.statistic;
        }
    }
    return best;
}

std::set<int> grow_gs(const BlanketContext& ctx) {
    std::set<int> blanket = ctx.forced;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int x : ctx.candidates) {
            if (blanket.count(x)) continue;
            if (test_given(ctx, x, blanket).p_value <= ctx.alpha) {
                blanket.insert(x);
                changed = true;
                break;
            }
        }
    }
    return blanket;
}

std::set<int> grow_iamb(const BlanketContext& ctx) {
    std::set<int> blanket = ctx.forced;
    for (;;) {
        int x = best_candidate(ctx, blanket);
        if (x < 0) break;
        blanket.insert(x);
    }
    return blanket;
}

std::set<int> grow_fast_iamb(const BlanketContext& ctx) {
    std::set<int> blanket = ctx.forced;
    for (;;) {
        struct Cand {
            double p;
            double stat;
            int x;
        };
        std::vector<Cand> ranked;
        for (int x : ctx.candidates) {
            if (blanket.count(x)) continue;
            CiResult r = test_given(ctx, x, blanket);
            if (r.p_value <= ctx.alpha) ranked.push_back({r.p_value, r.statistic, x});
        }
        if (ranked.empty()) break;
        std::sort(ranked.begin(), ranked.end(), [](const Cand& a, const Cand& b) {
            if (a.p != b.p) return a.p < b.p;
            if (a.stat != b.stat) return a.stat > b.stat;
            return a.x < b.x;
        });
        // admit the whole sorted batch, re-testing against the grown blanket
        bool added = false;
        for (const Cand& cand : ranked) {
            if (test_given(ctx, cand.x, blanket).p_value <= ctx.alpha) {
                blanket.insert(cand.x);
                added = true;
            }
        }
        if (!added) break;
    }
    return blanket;
}

std::set<int> grow_inter_iamb(const BlanketContext& ctx) {
    std::set<int> blanket = ctx.forced;
    for (;;) {
        int x = best_candidate(ctx, blanket);
        if (x < 0) break;
        blanket.insert(x);
        shrink(ctx, blanket, x);  // interleaved shrink spares the newcomer
    }
    return blanket;
}

}  // namespace

std::vector<int> markov_blanket(const Dataset& data, int v, BlanketMethod m, double alpha,
                                const ConstraintSet& c, CiType test) {
    c.validate();
    BlanketContext ctx = make_blanket_context(data, v, alpha, c, test);
    std::set<int> blanket;
    switch (m) {
        case BlanketMethod::gs: blanket = grow_gs(ctx); break;
        case BlanketMethod::iamb: blanket = grow_iamb(ctx); break;
        case BlanketMethod::fast_iamb: blanket = grow_fast_iamb(ctx); break;
        case BlanketMethod::inter_iamb: blanket = grow_inter_iamb(ctx); break;
    }
    shrink(ctx, blanket);
    return {blanket.begin(), blanket.end()};
}

std::vector<std::string> markov_blanket(const Dataset& data, const std::string& v,
                                        BlanketMethod m, double alpha, const ConstraintSet& c,
                                        CiType test) {
    std::vector<std::string> out;
    for (int id : markov_blanket(data, data.var_index(v), m, alpha, c, test))
        out.push_back(data.variable(static_cast<std::size_t>(id)).name);
    return out;
}

// ---------------------------------------------------------------- skeleton

namespace {

struct SkeletonResult {
    EdgeSet edges;
    // normalized var-id pair -> separating set (var ids, sorted)
    std::map<std::pair<int, int>, std::vector<int>> sepsets;
};

Arc name_pair(const Dataset& data, int u, int v) {
    std::string a = data.variable(static_cast<std::size_t>(u)).name;
    std::string b = data.variable(static_cast<std::size_t>(v)).name;
    if (b < a) std::swap(a, b);
    return {a, b};
}

SkeletonResult blanket_skeleton_full(const Dataset& data, BlanketMethod m, double alpha,
                                     const ConstraintSet& c, CiType test,
                                     std::vector<std::string>* log) {
    const int n = static_cast<int>(data.n_vars());
    std::vector<std::set<int>> mb(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        auto ids = markov_blanket(data, v, m, alpha, c, test);
        mb[static_cast<std::size_t>(v)] = {ids.begin(), ids.end()};
    }

    SkeletonResult out;
    std::set<std::pair<int, int>> id_edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (mb[static_cast<std::size_t>(u)].count(v) &&
                mb[static_cast<std::size_t>(v)].count(u))
                id_edges.insert({u, v});
    for (const auto& wl : c.whitelist) {
        int u = data.var_index(wl.first);
        int v = data.var_index(wl.second);
        id_edges.insert({std::min(u, v), std::max(u, v)});
    }

    // Prune: a pair stays adjacent only if no subset of the smaller blanket
    // separates it.
    for (auto it = id_edges.begin(); it != id_edges.end();) {
        auto [u, v] = *it;
        const auto& uname = data.variable(static_cast<std::size_t>(u)).name;
        const auto& vname = data.variable(static_cast<std::size_t>(v)).name;
        std::vector<int> pool_u, pool_v;
        for (int x : mb[static_cast<std::size_t>(u)])
            if (x != v) pool_u.push_back(x);
        for (int x : mb[static_cast<std::size_t>(v)])
            if (x != u) pool_v.push_back(x);
        const std::vector<int>& pool = pool_v.size() < pool_u.size() ? pool_v : pool_u;

        std::vector<int> found;
        bool separated = for_subsets(pool, [&](const std::vector<int>& s) {
            if (ci_test(data, u, v, s, test).p_value > alpha) {
                found = s;
                return true;
            }
            return false;
        });
        if (!separated) {
            ++it;
            continue;
        }
        if (c.whitelist_adjacent(uname, vname)) {
            if (log)
                log->push_back("whitelisted edge " + uname + " - " + vname +
                               " tests separable; forced back");
            ++it;
            continue;
        }
        out.sepsets[{u, v}] = found;
        it = id_edges.erase(it);
    }

    for (const auto& [u, v] : id_edges) out.edges.insert(name_pair(data, u, v));
    // keep id pairs too, callers map names back as needed
    return out;
}

}  // namespace

EdgeSet blanket_skeleton(const Dataset& data, BlanketMethod m, double alpha,
                         const ConstraintSet& c, CiType test) {
    c.validate();
    return blanket_skeleton_full(data, m, alpha, c, test, nullptr).edges;
}

Pdag constraint_learn(const Dataset& data, BlanketMethod m, double alpha, const ConstraintSet& c,
                      CiType test, std::vector<std::string>* log) {
    c.validate();
    SkeletonResult sk = blanket_skeleton_full(data, m, alpha, c, test, log);

    std::vector<std::string> names;
    for (const auto& spec : data.schema()) names.push_back(spec.name);
    Pdag p(names);
    for (const auto& [a, b] : sk.edges) p.add_undirected(p.node_index(a), p.node_index(b));

    // Whitelist directions are fixed before any rule-based orientation.
    for (const auto& [a, b] : c.whitelist) {
        int u = p.node_index(a);
        int v = p.node_index(b);
        if (p.has_directed(u, v)) continue;
        if (p.has_undirected(u, v)) {
            p.orient(u, v);
        } else {
            p.add_directed(u, v);
            if (log) log->push_back("whitelisted arc " + a + " -> " + b + " forced back");
        }
    }

    // v-structures from separating sets.
    auto sepset_of = [&](int u, int v) -> std::optional<std::vector<int>> {
        auto key = std::make_pair(std::min(u, v), std::max(u, v));
        auto it = sk.sepsets.find(key);
        if (it != sk.sepsets.end()) return it->second;
        for (int side : {u, v}) {
            std::vector<int> pool;
            for (int x : p.neighbours(side))
                if (x != u && x != v) pool.push_back(x);
            std::vector<int> found;
            bool ok = for_subsets(pool, [&](const std::vector<int>& s) {
                if (ci_test(data, u, v, s, test).p_value > alpha) {
                    found = s;
                    return true;
                }
                return false;
            });
            if (ok) {
                sk.sepsets[key] = found;
                return found;
            }
        }
        return std::nullopt;
    };

    auto orient_arm = [&](int a, int b) {
        const auto& an = names[static_cast<std::size_t>(a)];
        const auto& bn = names[static_cast<std::size_t>(b)];
        if (p.has_directed(a, b)) return;
        if (p.has_directed(b, a)) {
            if (log)
                log->push_back("v-structure wants " + an + " -> " + bn +
                               " but the reverse is fixed; kept");
            return;
        }
        if (!p.has_undirected(a, b)) return;
        if (c.blacklisted(an, bn)) {
            if (log) log->push_back("v-structure arm " + an + " -> " + bn + " blocked by blacklist");
            return;
        }
        if (!p.orient(a, b) && log)
            log->push_back("v-structure arm " + an + " -> " + bn + " skipped: cycles");
    };

    std::vector<int> order(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return names[static_cast<std::size_t>(a)] < names[static_cast<std::size_t>(b)]; });

    for (int u : order)
        for (int v : order) {
            if (names[static_cast<std::size_t>(u)] >= names[static_cast<std::size_t>(v)]) continue;
            if (p.adjacent(u, v)) continue;
            for (int w : order) {
                if (w == u || w == v || !p.adjacent(u, w) || !p.adjacent(v, w)) continue;
                auto sep = sepset_of(u, v);
                if (!sep) continue;
                if (std::find(sep->begin(), sep->end(), w) != sep->end()) continue;
                orient_arm(u, w);
                orient_arm(v, w);
            }
        }

    meek_closure(p, c, log);

    // Any undirected edge still admitting a blacklisted direction gets the
    // other direction, or is dropped when both ways are blocked.
    for (const auto& [a, b] : p.undirected_edges()) {
        int u = p.node_index(a);
        int v = p.node_index(b);
        bool fwd_blocked = c.blacklisted(a, b);
        bool rev_blocked = c.blacklisted(b, a);
        if (!fwd_blocked && !rev_blocked) continue;
        int from = fwd_blocked ? v : u;
        int to = fwd_blocked ? u : v;
        if (fwd_blocked && rev_blocked) {
            p.remove_edge(u, v);
            if (log) log->push_back("edge " + a + " - " + b + " dropped: both directions blacklisted");
        } else if (p.orient(from, to)) {
            if (log)
                log->push_back("edge " + a + " - " + b + " oriented " +
                               names[static_cast<std::size_t>(from)] + " -> " +
                               names[static_cast<std::size_t>(to)] + " to honor blacklist");
        } else {
            p.remove_edge(u, v);
            if (log)
                log->push_back("edge " + a + " - " + b +
                               " dropped: only legal orientation cycles");
        }
    }
    meek_closure(p, c, log);
    return p;
}

// ---------------------------------------------------------------- mmpc

EdgeSet mmpc_skeleton(const Dataset& data, double alpha, const ConstraintSet& c, CiType test) {
    c.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
    const int n = static_cast<int>(data.n_vars());

    std::map<std::tuple<int, int, std::vector<int>>, double> cache;
    auto pvalue = [&](int v, int x, const std::vector<int>& s) {
        auto key = std::make_tuple(std::min(v, x), std::max(v, x), s);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        double p = ci_test(data, v, x, s, test).p_value;
        cache.emplace(std::move(key), p);
        return p;
    };

    std::vector<std::set<int>> cpc(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        const auto& vname = data.variable(static_cast<std::size_t>(v)).name;
        std::set<int> forced;
        std::vector<int> candidates;
        for (int u = 0; u < n; ++u) {
            if (u == v) continue;
            const auto& uname = data.variable(static_cast<std::size_t>(u)).name;
            if (c.whitelist_adjacent(uname, vname))
                forced.insert(u);
            else if (!c.edge_forbidden(uname, vname))
                candidates.push_back(u);
        }
        std::set<int>& pc = cpc[static_cast<std::size_t>(v)];
        pc = forced;

        // Max-min forward phase: admit the candidate whose worst-case
        // (largest) p-value over subsets of the current set is smallest.
        for (;;) {
            int best = -1;
            double best_maxp = 2.0;
            std::vector<int> pool(pc.begin(), pc.end());
            for (int x : candidates) {
                if (pc.count(x)) continue;
                double maxp = 0.0;
                bool disqualified = for_subsets(pool, [&](const std::vector<int>& s) {
                    maxp = std::max(maxp, pvalue(v, x, s));
                    return maxp > alpha;
                });
                if (disqualified) continue;
                if (best < 0 || maxp < best_maxp) {
                    best = x;
                    best_maxp = maxp;
                }
            }
            if (best < 0) break;
            pc.insert(best);
        }

        // Backward: drop members separable by some subset of the rest.
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<int> members(pc.begin(), pc.end());
            for (int x : members) {
                if (forced.count(x)) continue;
                std::vector<int> pool;
                for (int y : pc)
                    if (y != x) pool.push_back(y);
                bool separated = for_subsets(pool, [&](const std::vector<int>& s) {
                    return pvalue(v, x, s) > alpha;
                });
                if (separated) {
                    pc.erase(x);
                    changed = true;
                    break;
                }
            }
        }
    }

    EdgeSet edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (cpc[static_cast<std::size_t>(u)].count(v) &&
                cpc[static_cast<std::size_t>(v)].count(u))
                edges.insert(name_pair(data, u, v));
    for (const auto& wl : c.whitelist) {
        int u = data.var_index(wl.first);
        int v = data.var_index(wl.second);
        edges.insert(name_pair(data, u, v));
    }
    return edges;
}

Dag hybrid_learn(const Dataset& data, RestrictMethod restrict_phase, MaximizeMethod maximize,
                 ScoreType s, double alpha, const ConstraintSet& c, const LearnerConfig& cfg) {
    EdgeSet skeleton = restrict_phase == RestrictMethod::mmpc
                           ? mmpc_skeleton(data, alpha, c, cfg.test)
                           : blanket_skeleton(data, BlanketMethod::iamb, alpha, c, cfg.test);
    return restricted_score_search(data, s, c, cfg, maximize, skeleton);
}

}  // namespace bnw
