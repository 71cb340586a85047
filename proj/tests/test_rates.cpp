#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "confdual/errors.hpp"
#include "confdual/fracchrom.hpp"
#include "confdual/graph.hpp"
#include "confdual/independence.hpp"
#include "confdual/rates.hpp"

using namespace confdual;

namespace {

SideInformationGraph fig2() {
    SideInformationGraph g(3);
    g.add_edge(1, 0);
    g.add_edge(2, 0);
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    g.add_edge(1, 2);
    return g;
}

WeightVector ones(int n) {
    WeightVector w;
    w.entries.assign(n, 1);
    return w;
}

}  // namespace

TEST_CASE("weight vector parsing") {
    const auto w = parse_weight_vector("1,1/2,0");
    CHECK(w.size() == 3);
    CHECK(w.entries[1] == Rational(1, 2));
    CHECK(w.sum() == Rational(3, 2));
    CHECK(!w.all_zero());
    CHECK(w.to_display_string() == "1,1/2,0");
    CHECK(parse_weight_vector("0,0").all_zero());
    CHECK_THROWS_AS(parse_weight_vector("1,-1"), ParseError);
    CHECK_THROWS_AS(parse_weight_vector("1,,2"), ParseError);
}

TEST_CASE("enumerate_tuples covers the box without the origin") {
    const auto ts = enumerate_tuples(BlockLengths{{1, 2}});
    REQUIRE(ts.size() == 5);
    CHECK(ts[0].t == std::vector<int>{0, 1});
    CHECK(ts[1].t == std::vector<int>{0, 2});
    CHECK(ts[2].t == std::vector<int>{1, 0});
    CHECK(ts[3].t == std::vector<int>{1, 1});
    CHECK(ts[4].t == std::vector<int>{1, 2});
    CHECK(enumerate_tuples(BlockLengths{{1, 1, 1}}).size() == 7);
}

TEST_CASE("symmetric direction reference bounds") {
    const auto f2 = fig2();
    const auto k3 = complete_bidirected(3);

    const auto cl = capacity_lower_bound(f2, ones(3), {1});
    CHECK(cl.value.to_display_string() == "1/2");
    CHECK(cl.witness_alpha == 2);
    CHECK(cl.direction == BoundDirection::kLower);
    const auto rl = storage_rate_upper_bound(f2, ones(3), {1});
    CHECK(rl.value.to_display_string() == "1");
    CHECK(rl.direction == BoundDirection::kUpper);

    CHECK(capacity_lower_bound(k3, ones(3), {1}).value.to_display_string() == "1");
    CHECK(storage_rate_upper_bound(k3, ones(3), {1}).value.to_display_string() == "1/2");
}

TEST_CASE("duality identity against the independent LP path") {
    CHECK(duality_identity_check(fig2(), ones(3), 1));
    CHECK(duality_identity_check(fig2(), ones(3), 2));
    CHECK(duality_identity_check(complete_bidirected(3), ones(3), 1));
    WeightVector mixed;
    mixed.entries = {Rational(1), Rational(1, 2), Rational(1, 2)};
    CHECK(duality_identity_check(fig2(), mixed, 2));
}

TEST_CASE("theorem 1 at the same witness is exact") {
    const auto cl = capacity_lower_bound(fig2(), ones(3), {1});
    const auto rl = storage_rate_upper_bound(fig2(), ones(3), {1});
    const auto rep = theorem1_complementarity(cl, rl, ones(3));
    CHECK(rep.same_witness);
    CHECK(rep.exact);
    CHECK(rep.residual_sign == 0);
}

TEST_CASE("theorem 1 random suite") {
    std::mt19937 rng(61);
    int done = 0;
    while (done < 12) {
        const int n = 2 + int(rng() % 3);
        const auto g = random_digraph(n, 0.5, rng());
        WeightVector lambda;
        bool zero = true;
        for (int j = 0; j < n; ++j) {
            const int num = int(rng() % 3);
            lambda.entries.push_back(Rational(num, 1 + int(rng() % 2)));
            if (num != 0) zero = false;
        }
        const std::int64_t r = 1 + int(rng() % 2);
        if (zero) continue;
        Rational scaled_total = 0;
        bool integral = true;
        for (const auto& l : lambda.entries) {
            const Rational s = l * r;
            if (rational_den(s) != 1) integral = false;
            scaled_total += s;
        }
        if (!integral || scaled_total == 0 || scaled_total > 8) continue;
        ++done;

        const auto cl = capacity_lower_bound(g, lambda, {r});
        const auto rl = storage_rate_upper_bound(g, lambda, {r});
        if (!cl.value.is_finite()) continue;  // edgeless confusion graph
        const auto rep = theorem1_complementarity(cl, rl, lambda);
        CHECK(rep.same_witness);
        CHECK(rep.exact);
    }
    CHECK(done == 12);
}

TEST_CASE("non-integral scalings are skipped, not misused") {
    WeightVector half;
    half.entries.assign(3, Rational(1, 2));
    const auto cl = capacity_lower_bound(fig2(), half, {1, 2});
    CHECK(cl.witness_r == 2);
    CHECK(cl.exhausted_range.find("skipped") != std::string::npos);
    CHECK_THROWS_AS(capacity_lower_bound(fig2(), half, {1, 3}), InvalidInput);
}

TEST_CASE("infeasible storage directions carry the infinity marker") {
    SideInformationGraph one(1);
    WeightVector w1;
    w1.entries = {Rational(1)};
    CHECK(capacity_lower_bound(one, w1, {1}).value.to_display_string() == "1");
    CHECK(!storage_rate_upper_bound(one, w1, {1}).value.is_finite());

    SideInformationGraph edgeless(2);
    const auto r = storage_rate_upper_bound(edgeless, ones(2), {1, 2, 3});
    CHECK(!r.value.is_finite());
    CHECK(r.exhausted_range.find("alpha=1") != std::string::npos);
}

TEST_CASE("sum-rate bounds and theorem 2") {
    const auto s2 = sum_capacity_bounds(fig2(), {BlockLengths{{1, 1, 1}}});
    CHECK(s2.c_sum_lower.value.to_display_string() == "3/2");
    CHECK(s2.r_sum_upper.value.to_display_string() == "3");
    CHECK(s2.same_witness);
    CHECK(s2.per_point_identity);
    CHECK(s2.residual_sign == 0);

    const auto sk = sum_capacity_bounds(complete_bidirected(3), {BlockLengths{{1, 1, 1}}});
    CHECK(sk.c_sum_lower.value.to_display_string() == "3");
    CHECK(sk.r_sum_upper.value.to_display_string() == "3/2");

    // Over the whole box the partial tuples strengthen both fig2 bounds.
    const auto sbox = sum_capacity_bounds(fig2(), enumerate_tuples(BlockLengths{{1, 1, 1}}));
    CHECK(sbox.c_sum_lower.value.to_display_string() == "2");
    CHECK(sbox.r_sum_upper.value.to_display_string() == "2");
    CHECK(sbox.c_sum_lower.witness_t.t == std::vector<int>{1, 0, 1});
    CHECK(sbox.per_point_identity);
}

TEST_CASE("weighted sum bounds") {
    WeightVector e1;
    e1.entries = {1, 0, 0};
    const auto wm = weighted_sum_bounds(fig2(), e1, {BlockLengths{{1, 1, 1}}});
    CHECK(wm.c_lower.value.to_display_string() == "1/2");

    WeightVector zero;
    zero.entries.assign(3, 0);
    const auto wz = weighted_sum_bounds(fig2(), zero, {BlockLengths{{1, 1, 1}}});
    CHECK(wz.c_lower.value.to_display_string() == "0");
    CHECK(wz.r_upper.value.to_display_string() == "0");
}

TEST_CASE("region sample corner points") {
    const auto pts = region_sample(fig2(), BlockLengths{{1, 1, 1}});
    REQUIRE(pts.size() == 7);
    bool found = false;
    for (const auto& p : pts) {
        if (p.t.t != std::vector<int>{1, 1, 1}) continue;
        REQUIRE(p.capacity_defined);
        REQUIRE(p.storage_defined);
        CHECK(p.alpha == 2);
        CHECK(p.chi_f == 4);
        CHECK(p.capacity[0].to_display_string() == "1/2");
        CHECK(p.storage[0].to_display_string() == "1");
        found = true;
    }
    CHECK(found);
}

TEST_CASE("mixed-witness residual reporting") {
    const auto f2 = fig2();
    const auto cl = capacity_lower_bound(f2, ones(3), {1});
    const auto rl2 = storage_rate_upper_bound(f2, ones(3), {2});
    const auto mix = theorem1_complementarity(cl, rl2, ones(3));
    CHECK(!mix.same_witness);
    CHECK(!mix.exact);
    // alpha(Gamma_2) = 4 = alpha(Gamma_1)^2, so the residual is exactly zero.
    CHECK(mix.residual_sign == 0);
    CHECK(mix.residual_lo <= 0);
    CHECK(mix.residual_hi >= 0);

    // Pentagon at r=1 capacity versus r=1 storage also pairs exactly; the
    // genuinely nonzero cross-scale case needs the 1024-vertex solve and
    // lives in the acceptance suite.
}

TEST_CASE("lemma 3 style monotonicity on random pairs") {
    std::mt19937 rng(71);
    int done = 0;
    while (done < 12) {
        const int n = 2 + int(rng() % 3);
        const auto g = random_digraph(n, 0.5, rng());
        BlockLengths s, t;
        int sum_s = 0, sum_t = 0;
        for (int j = 0; j < n; ++j) {
            const int sv = int(rng() % 2), extra = int(rng() % 2);
            s.t.push_back(sv);
            t.t.push_back(sv + extra);
            sum_s += sv;
            sum_t += sv + extra;
        }
        if (sum_s == 0 || sum_t > 7 || sum_s == sum_t) continue;
        ++done;

        const auto cgs = build_confusion_graph(g, s);
        const auto cgt = build_confusion_graph(g, t);
        const auto as = max_independent_set(cgs).alpha;
        const auto at = max_independent_set(cgt).alpha;
        const Rational chi_s(BigInt(1) << sum_s, BigInt(as));
        const Rational chi_t(BigInt(1) << sum_t, BigInt(at));
        CHECK(chi_s <= chi_t);
        CHECK(Rational(at) <= Rational(BigInt(1) << (sum_t - sum_s)) * Rational(as));
    }
    CHECK(done == 12);
}

TEST_CASE("rejected inputs") {
    CHECK_THROWS_AS(capacity_lower_bound(fig2(), ones(2), {1}), InvalidInput);
    WeightVector zero;
    zero.entries.assign(3, 0);
    CHECK_THROWS_AS(capacity_lower_bound(fig2(), zero, {1}), InvalidInput);
    CHECK_THROWS_AS(capacity_lower_bound(fig2(), ones(3), {}), InvalidInput);
    CHECK_THROWS_AS(capacity_lower_bound(fig2(), ones(3), {0}), InvalidInput);
    RatesOptions tiny;
    tiny.total_bit_cap = 2;
    CHECK_THROWS_AS(capacity_lower_bound(fig2(), ones(3), {1}, tiny), LimitError);
}
