#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "confdual/coding.hpp"
#include "confdual/errors.hpp"
#include "confdual/graph.hpp"
#include "confdual/guessing.hpp"
#include "confdual/independence.hpp"

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

const BlockLengths t111{{1, 1, 1}};

// Oracle: the best winning-set size over every strategy-table combination,
// by direct play of all tuples. Exponential; n = 2 only.
std::size_t brute_best_w(const SideInformationGraph& g) {
    const int n = g.node_count();
    REQUIRE(n == 2);
    const auto lay = tuple_layout(g, BlockLengths{{1, 1}});
    std::vector<int> table_bits(n);
    for (int j = 0; j < n; ++j) table_bits[j] = 1 << std::popcount(lay.side_masks[j]);
    std::size_t best = 0;
    for (std::uint32_t c0 = 0; c0 < (1u << table_bits[0]); ++c0)
        for (std::uint32_t c1 = 0; c1 < (1u << table_bits[1]); ++c1) {
            const std::uint32_t codes[2] = {c0, c1};
            std::size_t wins = 0;
            for (std::uint32_t x = 0; x < 4; ++x) {
                bool all = true;
                for (int j = 0; j < n; ++j) {
                    const std::uint32_t obs = extract_bits(x, lay.side_masks[j]);
                    const std::uint32_t guess = codes[j] >> obs & 1;
                    if (guess != extract_bits(x, lay.block_masks[j])) all = false;
                }
                if (all) ++wins;
            }
            best = std::max(best, wins);
        }
    return best;
}

}  // namespace

TEST_CASE("k3 even-weight strategy: xor tables, W = s, k = n-1") {
    const auto k3 = complete_bidirected(3);
    const std::vector<std::uint32_t> even{0b000, 0b011, 0b101, 0b110};
    const auto strat = strategy_from_independent_set(k3, t111, even);
    CHECK(strat.winning_set == even);
    CHECK(strat.p_win == Rational(1, 2));
    CHECK(strat.p_rand == Rational(1, 8));
    for (int j = 0; j < 3; ++j)
        for (std::uint32_t obs = 0; obs < 4; ++obs)
            CHECK(strat.guess_tables[j][obs] == ((obs & 1) ^ (obs >> 1 & 1)));

    const auto nums = guessing_numbers(strat);
    REQUIRE(nums.finite);
    CHECK(exact_equal(nums.k, AffineLog::from_rational(2)));
    CHECK(exact_equal(nums.k_complement, AffineLog::from_rational(1)));
}

TEST_CASE("fig2 strategy from {000, 111}") {
    const auto strat = strategy_from_independent_set(fig2(), t111, {0b000, 0b111});
    CHECK(std::binary_search(strat.winning_set.begin(), strat.winning_set.end(), 0u));
    CHECK(std::binary_search(strat.winning_set.begin(), strat.winning_set.end(), 7u));
    CHECK(strat.p_win >= Rational(1, 4));
    CHECK(strat.winning_set.size() == 2);  // W is independent and alpha = 2
    const auto nums = guessing_numbers(strat);
    CHECK(compare(nums.k, AffineLog::from_rational(1)) >= 0);
}

TEST_CASE("single node constant guess") {
    SideInformationGraph g(1);
    const auto strat = strategy_from_independent_set(g, BlockLengths{{1}}, {0});
    CHECK(strat.winning_set == std::vector<std::uint32_t>{0});
    CHECK(strat.p_win == Rational(1, 2));
    const auto nums = guessing_numbers(strat);
    CHECK(exact_equal(nums.k, AffineLog::from_rational(0)));
    CHECK(exact_equal(nums.k_complement, AffineLog::from_rational(1)));
}

TEST_CASE("constant tables on the edgeless pair win only at zero") {
    SideInformationGraph g(2);
    const auto eval = evaluate_strategy(g, BlockLengths{{1, 1}}, {{0}, {0}});
    CHECK(eval.exhaustive);
    CHECK(eval.strategy.winning_set == std::vector<std::uint32_t>{0});
    CHECK(eval.strategy.p_win == eval.strategy.p_rand);
}

TEST_CASE("guessing-number edge shapes") {
    GuessingStrategy full;
    full.t = t111;
    for (std::uint32_t x = 0; x < 8; ++x) full.winning_set.push_back(x);
    const auto top = guessing_numbers(full);
    CHECK(exact_equal(top.k, AffineLog::from_rational(3)));
    CHECK(exact_equal(top.k_complement, AffineLog::from_rational(0)));

    GuessingStrategy empty;
    empty.t = t111;
    CHECK(!guessing_numbers(empty).finite);

    GuessingStrategy no_bits;
    no_bits.t = BlockLengths{{0, 0}};
    CHECK_THROWS_AS(guessing_numbers(no_bits), InvalidInput);
}

TEST_CASE("k and k-complement always sum to n") {
    const auto strat = strategy_from_independent_set(fig2(), t111, {0b000, 0b111});
    const auto nums = guessing_numbers(strat);
    const AffineLog sum{nums.k.shift + nums.k_complement.shift,
                        nums.k.coeff + nums.k_complement.coeff, nums.k.base};
    CHECK(exact_equal(sum, AffineLog::from_rational(3)));
}

TEST_CASE("optimal bound over an enumeration") {
    const auto b = optimal_guessing_bound(complete_bidirected(3), {t111});
    CHECK(exact_equal(b.value, AffineLog::from_rational(2)));
    CHECK(b.witness_alpha == 4);
    CHECK(int(b.witness_set.size()) == 4);

    SideInformationGraph edgeless(3);
    const auto e = optimal_guessing_bound(edgeless, {t111, BlockLengths{{2, 1, 1}}});
    CHECK(exact_equal(e.value, AffineLog::from_rational(0)));
    CHECK(e.witness_alpha == 1);
}

TEST_CASE("theorem 3 bridge") {
    const auto r1 = theorem3_check(fig2(), t111);
    CHECK(r1.applicable);
    CHECK(r1.k_identity);
    CHECK(r1.corollary);
    const auto r2 = theorem3_check(complete_bidirected(3), t111);
    CHECK(r2.applicable);
    CHECK(r2.k_identity);
    CHECK(r2.corollary);
    SideInformationGraph single(1);
    CHECK(!theorem3_check(single, BlockLengths{{2}}).applicable);
}

TEST_CASE("dependent sets are rejected naming the confusable pair") {
    CHECK_THROWS_WITH_AS(strategy_from_independent_set(fig2(), t111, {0b000, 0b100}),
                         doctest::Contains("confusable"), InvalidInput);
    CHECK_THROWS_AS(strategy_from_independent_set(fig2(), t111, {}), InvalidInput);
    CHECK_THROWS_AS(strategy_from_independent_set(fig2(), t111, {0, 0}), InvalidInput);
}

TEST_CASE("table shape errors") {
    SideInformationGraph g(2);
    CHECK_THROWS_AS(evaluate_strategy(g, BlockLengths{{1, 1}}, {{0, 0}, {0}}), InvalidInput);
    CHECK_THROWS_AS(evaluate_strategy(g, BlockLengths{{1, 1}}, {{2}, {0}}), InvalidInput);
}

TEST_CASE("sampling mode is seeded and refuses to feed exact identities") {
    GuessingOptions opts;
    opts.total_bit_cap = 2;  // force the sampled path at three bits
    opts.allow_sampling = true;
    opts.samples = 1 << 14;
    opts.seed = 7;
    const auto k3 = complete_bidirected(3);
    std::vector<std::vector<std::uint32_t>> tables(3, std::vector<std::uint32_t>(4));
    for (int j = 0; j < 3; ++j)
        for (std::uint32_t obs = 0; obs < 4; ++obs) tables[j][obs] = (obs & 1) ^ (obs >> 1 & 1);

    const auto eval = evaluate_strategy(k3, t111, tables, opts);
    CHECK(!eval.exhaustive);
    CHECK(eval.strategy.winning_set.empty());
    CHECK(eval.samples == opts.samples);
    const double p = to_double(eval.p_win_estimate);
    CHECK(p > 0.45);
    CHECK(p < 0.55);
    CHECK(eval.radius95 > 0);

    const auto again = evaluate_strategy(k3, t111, tables, opts);
    CHECK(again.p_win_estimate == eval.p_win_estimate);

    GuessingOptions refuse = opts;
    refuse.allow_sampling = false;
    CHECK_THROWS_AS(evaluate_strategy(k3, t111, tables, refuse), LimitError);
}

TEST_CASE("strategy json round trip re-derives the winning set") {
    const auto k3 = complete_bidirected(3);
    const auto strat =
        strategy_from_independent_set(k3, t111, {0b000, 0b011, 0b101, 0b110});
    const std::string doc = to_json(strat);
    const auto back = strategy_from_json(doc);
    CHECK(back.winning_set == strat.winning_set);
    CHECK(back.p_win == strat.p_win);
    CHECK(to_json(back) == doc);
    CHECK_THROWS_AS(strategy_from_json("{\"schema\":\"1\",\"kind\":\"index\"}"), ParseError);
    CHECK_THROWS_AS(strategy_from_json("nul"), ParseError);
}

TEST_CASE("storage-guessing equivalence, both directions") {
    // Storage code -> strategy with |W| >= 2^r; strategy winning set ->
    // storage code of no smaller rate.
    const auto k3 = complete_bidirected(3);
    const auto cert = max_independent_set(build_confusion_graph(k3, t111));
    const auto code = storage_code_from_independent_set(k3, t111, cert.witness);
    const auto strat = strategy_from_independent_set(k3, t111, code.codebook);
    CHECK(strat.winning_set.size() >= std::size_t(1) << code.r);

    const auto back = storage_code_from_independent_set(k3, t111, strat.winning_set);
    CHECK(back.r >= code.r);
    CHECK(verify_code(back).pass);
}

TEST_CASE("brute force over all n=2 strategy tables matches alpha") {
    for (std::uint32_t edges = 0; edges < 4; ++edges) {
        SideInformationGraph g(2);
        if (edges & 1) g.add_edge(0, 1);
        if (edges & 2) g.add_edge(1, 0);
        const auto cg = build_confusion_graph(g, BlockLengths{{1, 1}});
        const auto alpha = max_independent_set(cg).alpha;
        CHECK(brute_best_w(g) == std::size_t(alpha));
        const auto cert = max_independent_set(cg);
        const auto strat = strategy_from_independent_set(g, BlockLengths{{1, 1}}, cert.witness);
        CHECK(strat.winning_set.size() == std::size_t(alpha));
    }
}
