#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <random>

#include "confdual/confusion.hpp"
#include "confdual/errors.hpp"
#include "confdual/graph.hpp"
#include "confdual/independence.hpp"

using namespace confdual;

namespace {

// Oracle: maximum independent set by scanning every vertex subset.
int brute_alpha(const UndirectedGraph& g) {
    const int n = g.vertex_count();
    REQUIRE(n <= 20);
    int best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = a + 1; b < n && ok; ++b)
                if ((mask >> a & 1) && (mask >> b & 1) && g.adjacent(a, b)) ok = false;
        if (ok) best = std::max(best, std::popcount(mask));
    }
    return best;
}

bool independent(const UndirectedGraph& g, const std::vector<int>& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (g.adjacent(s[i], s[j])) return false;
    return true;
}

}  // namespace

TEST_CASE("explicit solver matches brute force on random graphs") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + int(rng() % 12);
        const double p = 0.15 + 0.7 * (rng() % 100) / 100.0;
        const auto g = random_undirected_graph(n, p, rng());
        const auto cert = max_independent_set(g);
        CHECK(cert.alpha == brute_alpha(g));
        CHECK(int(cert.witness.size()) == cert.alpha);
        CHECK(independent(g, cert.witness));
    }
}

TEST_CASE("known independence numbers") {
    CHECK(max_independent_set(complete_graph(7)).alpha == 1);
    CHECK(max_independent_set(edgeless_graph(9)).alpha == 9);
    CHECK(max_independent_set(cycle_graph(5)).alpha == 2);
    CHECK(max_independent_set(cycle_graph(7)).alpha == 3);
    CHECK(max_independent_set(cycle_graph(8)).alpha == 4);
}

TEST_CASE("confusion solver matches the explicit solver and brute force") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + int(rng() % 3);
        const auto g = random_digraph(n, 0.5, rng());
        BlockLengths t;
        int total = 0;
        for (int j = 0; j < n; ++j) {
            const int v = 1 + int(rng() % 2);
            t.t.push_back(v);
            total += v;
        }
        if (total > 6) continue;
        const auto cg = build_confusion_graph(g, t);
        const auto tuple_cert = max_independent_set(cg);
        const auto explicit_cert = max_independent_set(to_explicit(cg));
        CHECK(tuple_cert.alpha == explicit_cert.alpha);
        CHECK(tuple_cert.alpha == brute_alpha(to_explicit(cg)));
        CHECK(std::int64_t(tuple_cert.witness.size()) == tuple_cert.alpha);
        for (std::size_t i = 0; i < tuple_cert.witness.size(); ++i)
            for (std::size_t j = i + 1; j < tuple_cert.witness.size(); ++j)
                CHECK(!cg.adjacent(tuple_cert.witness[i], tuple_cert.witness[j]));
    }
}

TEST_CASE("orbit and suffix engines agree") {
    std::mt19937 rng(23);
    IndependenceOptions orbit, suffix;
    orbit.engine = ConfusionEngine::kOrbit;
    suffix.engine = ConfusionEngine::kSuffix;
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + int(rng() % 3);
        const auto g = random_digraph(n, 0.4, rng());
        BlockLengths t;
        int total = 0;
        for (int j = 0; j < n; ++j) {
            const int v = 1 + int(rng() % 3);
            t.t.push_back(v);
            total += v;
        }
        if (total > 9) continue;
        const auto cg = build_confusion_graph(g, t);
        CHECK(max_independent_set(cg, orbit).alpha == max_independent_set(cg, suffix).alpha);
    }
}

TEST_CASE("bidirected cycle reference values") {
    // alpha(Gamma_t(C5)) at t = 1 per node is alpha(C5) = 2; at t = 2 per
    // node the 1024-vertex graph reaches 32 (acceptance covers the timing).
    const auto cg = build_confusion_graph(bidirected_cycle(5), BlockLengths{{1, 1, 1, 1, 1}});
    const auto cert = max_independent_set(cg);
    CHECK(cert.alpha == 4);
}

TEST_CASE("weighted solver matches brute force") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + int(rng() % 8);
        const auto g = random_undirected_graph(n, 0.5, rng());
        std::vector<Rational> w;
        for (int v = 0; v < n; ++v) w.push_back(Rational(int(rng() % 5), 1 + int(rng() % 3)));

        Rational best = 0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            bool ok = true;
            Rational total = 0;
            for (int a = 0; a < n && ok; ++a) {
                if (!(mask >> a & 1)) continue;
                total += w[a];
                for (int b = a + 1; b < n && ok; ++b)
                    if ((mask >> b & 1) && g.adjacent(a, b)) ok = false;
            }
            if (ok && total > best) best = total;
        }

        const auto res = max_weight_independent_set(g, w);
        CHECK(!res.stopped_early);
        CHECK(res.weight == best);
        CHECK(independent(g, res.witness));
    }
}

TEST_CASE("early stop returns a set above the threshold") {
    const auto g = cycle_graph(9);
    std::vector<Rational> w(9, 1);
    const Rational threshold(2);
    const auto res = max_weight_independent_set(g, w, {}, &threshold);
    CHECK(res.weight > 2);
    CHECK(independent(g, res.witness));
}

TEST_CASE("caps and timeouts") {
    IndependenceOptions tiny;
    tiny.vertex_cap = 4;
    const auto cg = build_confusion_graph(complete_bidirected(2), BlockLengths{{2, 2}});
    CHECK_THROWS_AS(max_independent_set(cg, tiny), LimitError);
}
