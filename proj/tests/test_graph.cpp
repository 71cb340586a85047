#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "confdual/errors.hpp"
#include "confdual/graph.hpp"

using namespace confdual;

TEST_CASE("directed parse and serialize round trip") {
    const std::string text = "# comment\nn 3\ne 2 1\ne 3 1\ne 1 2\ne 1 3\ne 2 3\n";
    const auto g = parse_side_information_graph(text);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 5);
    CHECK(g.in_set(0) == std::vector<int>{1, 2});
    CHECK(g.in_set(1) == std::vector<int>{0});
    CHECK(g.in_set(2) == std::vector<int>{0, 1});
    CHECK(parse_side_information_graph(serialize(g)) == g);
}

TEST_CASE("undirected parse and serialize round trip") {
    const auto g = parse_undirected_graph("n 4\nu 1 2\nu 2 3\nu 3 4\n");
    CHECK(g.vertex_count() == 4);
    CHECK(g.edge_count() == 3);
    CHECK(g.adjacent(0, 1));
    CHECK(!g.adjacent(0, 2));
    CHECK(parse_undirected_graph(serialize(g)) == g);
}

TEST_CASE("file kind detection") {
    CHECK(graph_file_is_undirected("n 2\nu 1 2\n"));
    CHECK(!graph_file_is_undirected("n 2\ne 1 2\n"));
    CHECK(!graph_file_is_undirected("n 2\n"));
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_AS(parse_side_information_graph("e 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_side_information_graph("n 2\ne 1 3\n"), ParseError);
    CHECK_THROWS_AS(parse_side_information_graph("n 2\ne 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_side_information_graph("n 2\nq 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_side_information_graph("n 2\ne 1 2\nu 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_undirected_graph("n 2\ne 1 2\n"), ParseError);
}

TEST_CASE("block lengths") {
    CHECK(BlockLengths{{1, 1, 1}}.total_bits() == 3);
    CHECK(BlockLengths{{2, 0, 3}}.total_bits() == 5);
    CHECK(BlockLengths{{0}}.total_bits() == 0);
    CHECK_THROWS_AS(BlockLengths{{1, -1}}.total_bits(), InvalidInput);
    CHECK(BlockLengths{{2, 0, 3}}.to_display_string() == "2,0,3");
}

TEST_CASE("random digraph is deterministic in the seed") {
    const auto a = random_digraph(6, 0.4, 99);
    const auto b = random_digraph(6, 0.4, 99);
    const auto c = random_digraph(6, 0.4, 100);
    CHECK(a == b);
    CHECK(a != c);
    for (int j = 0; j < 6; ++j)
        for (int i : a.in_set(j)) CHECK(i != j);
}

TEST_CASE("disjunctive product matches its definition") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g1 = random_undirected_graph(4, 0.5, rng());
        const auto g2 = random_undirected_graph(3, 0.5, rng());
        const auto p = disjunctive_product(g1, g2);
        REQUIRE(p.vertex_count() == 12);
        for (int u1 = 0; u1 < 4; ++u1)
            for (int u2 = 0; u2 < 3; ++u2)
                for (int v1 = 0; v1 < 4; ++v1)
                    for (int v2 = 0; v2 < 3; ++v2) {
                        const int u = u1 * 3 + u2, v = v1 * 3 + v2;
                        if (u == v) continue;
                        const bool want = g1.adjacent(u1, v1) || g2.adjacent(u2, v2);
                        CHECK(p.adjacent(u, v) == want);
                    }
    }
}

TEST_CASE("generators") {
    CHECK(complete_graph(5).edge_count() == 10);
    CHECK(cycle_graph(5).edge_count() == 5);
    CHECK(edgeless_graph(4).edge_count() == 0);
    const auto c5 = bidirected_cycle(5);
    CHECK(c5.edge_count() == 10);
    CHECK(c5.in_set(0) == std::vector<int>{1, 4});
    const auto k3 = complete_bidirected(3);
    CHECK(k3.edge_count() == 6);
    CHECK(k3.in_set(1) == std::vector<int>{0, 2});
}

TEST_CASE("vertex caps are enforced") {
    CHECK_THROWS_AS(UndirectedGraph(100, 50), LimitError);
    CHECK_THROWS_AS(disjunctive_product(complete_graph(10), complete_graph(10), 50), LimitError);
}
