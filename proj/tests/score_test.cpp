#include <cmath>
#include <vector>

#include "bnw/bayesnet.hpp"
#include "bnw/score.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bnw;
using namespace testutil;

namespace {

Dataset balanced_coin() {
    // 10 rows, counts (5,5) on A
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 10; ++i) rows.push_back({i % 2, 0});
    return make_dataset({var("A", {"h", "t"}), var("T", {"0", "1"}, VarRole::target)}, rows);
}

}  // namespace

TEST_CASE("parentless scores have their closed forms") {
    Dataset data = balanced_coin();
    const double ll = 10.0 * std::log(0.5);
    CHECK(log_likelihood(data, 0, {}) == doctest::Approx(ll).epsilon(1e-12));
    CHECK(local_score(data, 0, {}, ScoreType::bic) ==
          doctest::Approx(ll - std::log(10.0) / 2.0).epsilon(1e-12));
    CHECK(local_score(data, 0, {}, ScoreType::aic) == doctest::Approx(ll - 1.0).epsilon(1e-12));
}

TEST_CASE("k2 score matches direct gamma evaluation") {
    // counts (1,1): Gamma(r) / Gamma(n + r) * prod Gamma(n_jk + 1)
    Dataset data = make_dataset({var("A", {"h", "t"}), var("T", {"0", "1"}, VarRole::target)},
                                {{0, 0}, {1, 0}});
    const double want = std::lgamma(2.0) - std::lgamma(4.0) + std::lgamma(2.0) + std::lgamma(2.0);
    CHECK(local_score(data, 0, {}, ScoreType::k2) == doctest::Approx(want).epsilon(1e-12));
    CHECK(want == doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-12));

    // with one binary parent, per-configuration blocks multiply
    Dataset d2 = make_dataset({var("A", {"h", "t"}), var("B", {"x", "y"}),
                               var("T", {"0", "1"}, VarRole::target)},
                              {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 1, 0}});
    // B=x: A counts (1,1); B=y: A counts (2,0)
    const double block_x = std::lgamma(2.0) - std::lgamma(4.0) + std::lgamma(2.0) + std::lgamma(2.0);
    const double block_y = std::lgamma(2.0) - std::lgamma(4.0) + std::lgamma(3.0) + std::lgamma(1.0);
    CHECK(local_score(d2, 0, {1}, ScoreType::k2) ==
          doctest::Approx(block_x + block_y).epsilon(1e-12));
}

TEST_CASE("bic penalty counts free parameters per parent configuration") {
    Rng rng(8);
    std::vector<VariableSpec> schema = {var("A", {"a0", "a1", "a2"}), var("B", {"b0", "b1"}),
                                        var("C", {"c0", "c1", "c2"}),
                                        var("T", {"0", "1"}, VarRole::target)};
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 200; ++i)
        rows.push_back({static_cast<int>(uniform_index(rng, 3)),
                        static_cast<int>(uniform_index(rng, 2)),
                        static_cast<int>(uniform_index(rng, 3)),
                        static_cast<int>(uniform_index(rng, 2))});
    Dataset data = make_dataset(schema, rows);
    const double ll = log_likelihood(data, 0, {1, 2});
    const double k = (3 - 1) * (2 * 3);  // (r-1) * q
    CHECK(local_score(data, 0, {1, 2}, ScoreType::bic) ==
          doctest::Approx(ll - std::log(200.0) / 2.0 * k).epsilon(1e-12));
    CHECK(local_score(data, 0, {1, 2}, ScoreType::aic) == doctest::Approx(ll - k).epsilon(1e-12));
}

TEST_CASE("score rejects a node listed among its own parents") {
    Dataset data = balanced_coin();
    CHECK_THROWS_AS(local_score(data, 0, {0}, ScoreType::bic), DataError);
}

TEST_CASE("an independent parent rarely improves bic") {
    int improved = 0;
    for (int seed = 0; seed < 100; ++seed) {
        Dataset data = noise_dataset(2000, 2, static_cast<std::uint64_t>(seed));
        double alone = local_score(data, 0, {}, ScoreType::bic);
        double with_parent = local_score(data, 0, {1}, ScoreType::bic);
        if (with_parent > alone) ++improved;
    }
    CHECK(improved <= 10);
}

TEST_CASE("global score decomposes over families") {
    Dataset data = forward_sample(benchmark_bn(), 500, 31);
    std::vector<std::string> names;
    for (const auto& v : data.schema()) names.push_back(v.name);
    Dag empty(names);
    double sum = 0.0;
    for (std::size_t v = 0; v < data.n_vars(); ++v)
        sum += local_score(data, static_cast<int>(v), {}, ScoreType::bic);
    CHECK(global_score(empty, data, ScoreType::bic) == doctest::Approx(sum).epsilon(1e-12));

    Dag one = empty;
    one.add_arc("a", "b");
    double delta = local_score(data, one.node_index("b"), {one.node_index("a")}, ScoreType::bic) -
                   local_score(data, one.node_index("b"), {}, ScoreType::bic);
    CHECK(global_score(one, data, ScoreType::bic) ==
          doctest::Approx(global_score(empty, data, ScoreType::bic) + delta).epsilon(1e-12));
}

TEST_CASE("global bic equals a direct joint-likelihood computation") {
    Rng rng(44);
    Dag g = random_dag(rng, 5, 0.4);
    Dataset data = forward_sample(monotone_bn(g), 800, 77);

    // per-row joint log-likelihood from raw conditional frequencies
    double ll = 0.0;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        for (std::size_t v = 0; v < data.n_vars(); ++v) {
            const auto& ps = g.parents(static_cast<int>(v));
            std::int64_t joint = 0, margin = 0;
            for (std::size_t r = 0; r < data.n_rows(); ++r) {
                bool same_parents = true;
                for (int p : ps)
                    if (data.cell(r, static_cast<std::size_t>(p)) !=
                        data.cell(i, static_cast<std::size_t>(p)))
                        same_parents = false;
                if (!same_parents) continue;
                ++margin;
                if (data.cell(r, v) == data.cell(i, v)) ++joint;
            }
            ll += std::log(static_cast<double>(joint) / static_cast<double>(margin));
        }
    }
    double penalty = 0.0;
    for (std::size_t v = 0; v < data.n_vars(); ++v) {
        double q = 1.0;
        for (int p : g.parents(static_cast<int>(v)))
            q *= data.variable(static_cast<std::size_t>(p)).cardinality();
        penalty += (data.variable(v).cardinality() - 1) * q;
    }
    const double want = ll - std::log(static_cast<double>(data.n_rows())) / 2.0 * penalty;
    CHECK(global_score(g, data, ScoreType::bic) == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("arc deltas equal local score differences on random graphs") {
    Dataset data = noise_dataset(400, 5, 3, 2);
    Rng rng(17);
    std::vector<std::string> names = {"d1", "d2", "d3", "d4", "d5", "t"};
    for (int rep = 0; rep < 100; ++rep) {
        Dag g(names);
        for (std::size_t u = 0; u < names.size(); ++u)
            for (std::size_t w = 0; w < names.size(); ++w)
                if (u != w && uniform01(rng) < 0.25) g.add_arc(static_cast<int>(u), static_cast<int>(w));
        int u = static_cast<int>(uniform_index(rng, names.size()));
        int w = static_cast<int>(uniform_index(rng, names.size()));
        if (u == w || g.has_arc(u, w) || g.creates_cycle(u, w)) continue;
        for (ScoreType s : {ScoreType::bic, ScoreType::aic, ScoreType::k2}) {
            double before = global_score(g, data, s);
            std::vector<int> pa = g.parents(w);
            double lb = local_score(data, w, pa, s);
            pa.push_back(u);
            double la = local_score(data, w, pa, s);
            Dag g2 = g;
            REQUIRE(g2.add_arc(u, w));
            double after = global_score(g2, data, s);
            CHECK(after - before == doctest::Approx(la - lb).epsilon(1e-9));
        }
    }
}

TEST_CASE("markov equivalent chains share one bic score") {
    Dataset data = forward_sample(chain_bn(3), 2000, 5);
    std::vector<std::string> names = {"a", "b", "c"};
    Dag fwd(names), bwd(names), fork(names);
    fwd.add_arc("a", "b");
    fwd.add_arc("b", "c");
    bwd.add_arc("c", "b");
    bwd.add_arc("b", "a");
    fork.add_arc("b", "a");
    fork.add_arc("b", "c");
    const double s1 = global_score(fwd, data, ScoreType::bic);
    const double s2 = global_score(bwd, data, ScoreType::bic);
    const double s3 = global_score(fork, data, ScoreType::bic);
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-9));
    CHECK(s1 == doctest::Approx(s3).epsilon(1e-9));
}

TEST_CASE("the score cache returns exactly what it stored") {
    Dataset data = forward_sample(benchmark_bn(), 300, 9);
    Scorer scorer(data, ScoreType::bic);
    for (int v = 0; v < static_cast<int>(data.n_vars()); ++v) {
        std::vector<int> pa;
        for (int p = 0; p < static_cast<int>(data.n_vars()); ++p)
            if (p != v && p % 2 == 0) pa.push_back(p);
        double first = scorer.local(v, pa);
        double direct = local_score(data, v, pa, ScoreType::bic);
        double again = scorer.local(v, pa);
        CHECK(first == direct);  // bitwise: cache must be invisible
        CHECK(again == direct);
    }

    LocalScoreCache cache;
    CHECK_FALSE(cache.find(0, {1, 2}, ScoreType::bic).has_value());
    cache.store(0, {1, 2}, ScoreType::bic, 1.5);
    auto hit = cache.find(0, {1, 2}, ScoreType::bic);
    REQUIRE(hit.has_value());
    CHECK(*hit == 1.5);
    CHECK_FALSE(cache.find(0, {1, 2}, ScoreType::aic).has_value());
    CHECK(cache.size() == 1);

    // Scorer normalizes parent order before consulting the cache
    CHECK(scorer.local(1, {0, 2}) == scorer.local(1, {2, 0}));
}

TEST_CASE("score names round-trip") {
    for (ScoreType s : {ScoreType::bic, ScoreType::aic, ScoreType::k2})
        CHECK(parse_score(score_name(s)) == s);
    CHECK_THROWS_AS(parse_score("bdeu"), UsageError);
}
