#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "confdual/confusion.hpp"
#include "confdual/errors.hpp"
#include "confdual/graph.hpp"

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

// Oracle: confusability straight from the definition, independent of the
// difference-set representation. Blocks sit MSB first.
bool oracle_confusable(std::uint32_t x, std::uint32_t z, const SideInformationGraph& g,
                       const std::vector<int>& t) {
    int total = 0;
    for (int v : t) total += v;
    auto block = [&](std::uint32_t w, int j) {
        int offset = 0;
        for (int i = 0; i < j; ++i) offset += t[i];
        const int width = t[j];
        return width == 0 ? 0u : (w >> (total - offset - width)) & ((1u << width) - 1);
    };
    for (int j = 0; j < g.node_count(); ++j) {
        if (block(x, j) == block(z, j)) continue;
        bool agrees = true;
        for (int i : g.in_set(j))
            if (block(x, i) != block(z, i)) agrees = false;
        if (agrees) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("fig2 confusion graph matches the brute-forced difference set") {
    const auto g = fig2();
    const auto cg = build_confusion_graph(g, BlockLengths{{1, 1, 1}});
    CHECK(cg.vertex_count() == 8);
    CHECK(cg.degree() == 4);
    CHECK(cg.edge_count() == 16);
    // Expected diffs 100, 010, 011, 001.
    CHECK(cg.confusable_diffs() == std::vector<std::uint32_t>{1, 2, 3, 4});

    // Oracle over all 7 nonzero differences, both through the definitional
    // pair test and through the library's definitional cross-check.
    std::set<std::uint32_t> brute;
    for (std::uint32_t d = 1; d < 8; ++d) {
        CHECK(oracle_confusable(0, d, g, {1, 1, 1}) == confusable(0, d, g, BlockLengths{{1, 1, 1}}));
        if (oracle_confusable(0, d, g, {1, 1, 1})) brute.insert(d);
    }
    CHECK(brute == std::set<std::uint32_t>{1, 2, 3, 4});

    // Adjacency is the XOR of the endpoints landing in the diff set.
    for (std::uint32_t x = 0; x < 8; ++x)
        for (std::uint32_t z = 0; z < 8; ++z)
            CHECK(cg.adjacent(x, z) == (x != z && brute.count(x ^ z) > 0));
}

TEST_CASE("difference set equals the definitional oracle on random instances") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + int(rng() % 3);
        const auto g = random_digraph(n, 0.5, rng());
        BlockLengths t;
        int total = 0;
        for (int j = 0; j < n; ++j) {
            const int v = int(rng() % 3);  // includes zero-length blocks
            t.t.push_back(v);
            total += v;
        }
        if (total == 0 || total > 8) continue;
        const auto cg = build_confusion_graph(g, t);
        for (std::uint32_t d = 1; d < (1u << total); ++d)
            CHECK(cg.confusable_diff(d) ==
                  oracle_confusable(0, d, g, t.t));
    }
}

TEST_CASE("translation invariance") {
    const auto cg = build_confusion_graph(fig2(), BlockLengths{{2, 1, 1}});
    std::vector<std::pair<std::uint32_t, std::uint32_t>> sample;
    for (std::uint32_t x = 0; x < 16; ++x)
        for (std::uint32_t z = x + 1; z < 16; ++z) sample.push_back({x, z});
    for (std::uint32_t c = 0; c < 16; ++c) CHECK(translation_automorphism_check(cg, c, sample));
}

TEST_CASE("layout masks tile the word MSB first") {
    const auto lay = tuple_layout(fig2(), BlockLengths{{2, 0, 1}});
    CHECK(lay.total_bits == 3);
    CHECK(lay.block_masks == std::vector<std::uint32_t>{0b110, 0b000, 0b001});
    // A_1 = {2,3}, A_2 = {1}, A_3 = {1,2}
    CHECK(lay.side_masks == std::vector<std::uint32_t>{0b001, 0b110, 0b110});

    const auto cg = build_confusion_graph(fig2(), BlockLengths{{2, 0, 1}});
    for (int j = 0; j < 3; ++j) {
        CHECK(cg.block_mask(j) == lay.block_masks[j]);
        CHECK(cg.side_mask(j) == lay.side_masks[j]);
    }
}

TEST_CASE("extract_bits compacts ascending mask order") {
    CHECK(extract_bits(0b1010, 0b1111) == 0b1010);
    CHECK(extract_bits(0b1010, 0b1010) == 0b11);
    CHECK(extract_bits(0b1010, 0b0101) == 0b00);
    CHECK(extract_bits(0b100, 0b110) == 0b10);
    CHECK(extract_bits(0xffffffff, 0) == 0);
}

TEST_CASE("all-zero tuple gives the one-vertex graph") {
    SideInformationGraph g(2);
    const auto cg = build_confusion_graph(g, BlockLengths{{0, 0}});
    CHECK(cg.vertex_count() == 1);
    CHECK(cg.degree() == 0);
}

TEST_CASE("caps") {
    SideInformationGraph g(1);
    CHECK_THROWS_AS(build_confusion_graph(g, BlockLengths{{25}}, 20), LimitError);
    CHECK_THROWS_AS(build_confusion_graph(g, BlockLengths{{40}}, 64), LimitError);
    CHECK_THROWS_AS(build_confusion_graph(g, BlockLengths{{1, 1}}), InvalidInput);
}

TEST_CASE("explicit conversion preserves adjacency") {
    const auto cg = build_confusion_graph(fig2(), BlockLengths{{1, 1, 1}});
    const auto g = to_explicit(cg);
    REQUIRE(g.vertex_count() == 8);
    for (std::uint32_t x = 0; x < 8; ++x)
        for (std::uint32_t z = 0; z < 8; ++z)
            CHECK(g.adjacent(int(x), int(z)) == cg.adjacent(x, z));

    const auto diffs = xor_difference_set(g);
    REQUIRE(diffs.has_value());
    CHECK(*diffs == cg.confusable_diffs());
}
