#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "confdual/coding.hpp"
#include "confdual/errors.hpp"
#include "confdual/fracchrom.hpp"
#include "confdual/graph.hpp"
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

}  // namespace

TEST_CASE("fig2 index code from an optimal coloring round-trips every input") {
    const auto g = fig2();
    const auto cg = build_confusion_graph(g, t111);
    std::vector<int> coloring;
    CHECK(chromatic_number(to_explicit(cg), {}, &coloring) == 4);

    const auto code = index_code_from_coloring(g, t111, coloring);
    CHECK(code.r == 2);
    const auto rep = verify_code(code);
    CHECK(rep.pass);
    CHECK(rep.checked == 24);  // 8 tuples x 3 nodes

    // Decode by hand: every node recovers its bit from (index, side info).
    for (std::uint32_t x = 0; x < 8; ++x) {
        const std::uint32_t index = code.encoder[x];
        for (int j = 0; j < 3; ++j) {
            const std::uint32_t obs = extract_bits(x, code.side_masks[j]);
            const std::uint32_t side_bits = std::popcount(code.side_masks[j]);
            const std::uint32_t key = (index << side_bits) | obs;
            CHECK(code.decoders[j][key] == extract_bits(x, code.block_masks[j]));
        }
    }
}

TEST_CASE("improper colorings are rejected with the violating pair") {
    const auto g = fig2();
    const auto cg = build_confusion_graph(g, t111);
    std::vector<int> coloring;
    chromatic_number(to_explicit(cg), {}, &coloring);
    std::vector<int> bad = coloring;
    bad[1] = bad[0];  // 000 and 001 are confusable in fig2's confusion graph
    CHECK_THROWS_WITH_AS(index_code_from_coloring(g, t111, bad),
                         doctest::Contains("confusable"), InvalidInput);
}

TEST_CASE("k3 parity storage code survives every single failure") {
    const auto k3 = complete_bidirected(3);
    const std::vector<std::uint32_t> even{0b000, 0b011, 0b101, 0b110};
    const auto code = storage_code_from_independent_set(k3, t111, even);
    CHECK(code.r == 2);
    CHECK(code.codebook == even);

    for (std::int64_t m = 0; m < 4; ++m)
        for (int node = 0; node < 3; ++node)
            CHECK(simulate_failure(code, m, node) ==
                  extract_bits(code.codebook[m], code.block_masks[node]));

    // The recovery of each node is the XOR of the other two bits.
    for (std::int64_t m = 0; m < 4; ++m) {
        const std::uint32_t w = code.codebook[m];
        const std::uint32_t b0 = w >> 2 & 1, b1 = w >> 1 & 1, b2 = w & 1;
        CHECK(simulate_failure(code, m, 0) == (b1 ^ b2));
        CHECK(simulate_failure(code, m, 1) == (b0 ^ b2));
        CHECK(simulate_failure(code, m, 2) == (b0 ^ b1));
    }

    const auto rep = verify_code(code);
    CHECK(rep.pass);
    CHECK(rep.checked == 18);  // 6 pair checks + 12 recovery checks
}

TEST_CASE("storage recovery is trivial at zero-width blocks") {
    const auto g = fig2();
    const BlockLengths t{{1, 0, 1}};
    const auto cert = max_independent_set(build_confusion_graph(g, t));
    const auto code = storage_code_from_independent_set(g, t, cert.witness);
    CHECK(code.r == 1);
    for (std::int64_t m = 0; m < 2; ++m) CHECK(simulate_failure(code, m, 1) == 0);
}

TEST_CASE("dependent codebooks are rejected naming a node") {
    const auto g = fig2();
    CHECK_THROWS_WITH_AS(storage_code_from_independent_set(g, t111, {0b000, 0b100}),
                         doctest::Contains("node"), InvalidInput);
    CHECK_THROWS_AS(storage_code_from_independent_set(g, t111, {0b000, 0b000}), InvalidInput);
    CHECK_THROWS_AS(storage_code_from_independent_set(g, t111, {}), InvalidInput);
}

TEST_CASE("fault injection is detected with a counterexample") {
    const auto g = fig2();
    const auto cg = build_confusion_graph(g, t111);
    std::vector<int> coloring;
    chromatic_number(to_explicit(cg), {}, &coloring);
    const auto icode = index_code_from_coloring(g, t111, coloring);

    auto corrupted = icode;
    for (auto& e : corrupted.decoders[0])
        if (e != kTableUndefined) {
            e ^= 1;
            break;
        }
    const auto r1 = verify_code(corrupted);
    CHECK(!r1.pass);
    CHECK(r1.counterexample.find("node") != std::string::npos);

    const auto k3 = complete_bidirected(3);
    const auto scode =
        storage_code_from_independent_set(k3, t111, {0b000, 0b011, 0b101, 0b110});
    auto bad_book = scode;
    bad_book.codebook[1] = 0b001;
    const auto r2 = verify_code(bad_book);
    CHECK(!r2.pass);
    CHECK(r2.counterexample.find("confusable") != std::string::npos);

    auto bad_table = scode;
    bad_table.recovery[2][extract_bits(scode.codebook[0], scode.side_masks[2])] ^= 1;
    CHECK(!verify_code(bad_table).pass);
}

TEST_CASE("simulate_failure rejects bad queries") {
    const auto k3 = complete_bidirected(3);
    const auto code = storage_code_from_independent_set(k3, t111, {0b000, 0b011, 0b101, 0b110});
    CHECK_THROWS_AS(simulate_failure(code, 4, 0), InvalidInput);
    CHECK_THROWS_AS(simulate_failure(code, -1, 0), InvalidInput);
    CHECK_THROWS_AS(simulate_failure(code, 0, 3), InvalidInput);
}

TEST_CASE("json round trips are byte identical") {
    const auto g = fig2();
    const auto cg = build_confusion_graph(g, t111);
    std::vector<int> coloring;
    chromatic_number(to_explicit(cg), {}, &coloring);
    const auto icode = index_code_from_coloring(g, t111, coloring);
    const std::string ijson = to_json(icode);
    const auto iback = index_code_from_json(ijson);
    CHECK(to_json(iback) == ijson);
    CHECK(verify_code(iback).pass);

    const auto k3 = complete_bidirected(3);
    const auto scode =
        storage_code_from_independent_set(k3, t111, {0b000, 0b011, 0b101, 0b110});
    const std::string sjson = to_json(scode);
    const auto sback = storage_code_from_json(sjson);
    CHECK(to_json(sback) == sjson);
    CHECK(verify_code(sback).pass);

    CHECK(code_kind_from_json(ijson) == "index");
    CHECK(code_kind_from_json(sjson) == "storage");
    CHECK_THROWS_AS(index_code_from_json(sjson), ParseError);
    CHECK_THROWS_AS(index_code_from_json("{"), ParseError);
    CHECK_THROWS_AS(code_kind_from_json("[1,2]"), ParseError);
}

TEST_CASE("r equals floor log2 alpha for maximum codebooks") {
    std::mt19937 rng(47);
    int done = 0;
    while (done < 10) {
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
        const auto cert = max_independent_set(cg);
        if (cert.alpha < 2) continue;
        ++done;
        const auto code = storage_code_from_independent_set(g, t, cert.witness);
        int floor_log = 0;
        while ((std::int64_t(1) << (floor_log + 1)) <= cert.alpha) ++floor_log;
        CHECK(code.r == floor_log);
        CHECK(verify_code(code).pass);
    }
}

TEST_CASE("index codes exist at r = ceil log2 chi on random instances") {
    std::mt19937 rng(53);
    int done = 0;
    while (done < 10) {
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
        ++done;
        const auto cg = build_confusion_graph(g, t);
        std::vector<int> coloring;
        const int chi = chromatic_number(to_explicit(cg), {}, &coloring);
        const auto code = index_code_from_coloring(g, t, coloring);
        int ceil_log = 0;
        while ((1 << ceil_log) < chi) ++ceil_log;
        CHECK(code.r == ceil_log);
        CHECK(verify_code(code).pass);
    }
}
