#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace confdual {

inline constexpr std::int64_t kDefaultExplicitVertexCap = std::int64_t(1) << 20;

// Directed side-information graph on nodes [n]. A directed edge i -> j means
// node j has message i available (i is in j's in-neighborhood A_j). Nodes are
// 0-indexed internally; all file formats and rendered output are 1-indexed.
class SideInformationGraph {
public:
    explicit SideInformationGraph(int n);

    int node_count() const { return n_; }
    // Sorted in-neighborhood A_j.
    const std::vector<int>& in_set(int j) const { return in_sets_[j]; }
    bool has_edge(int i, int j) const;  // edge i -> j
    void add_edge(int i, int j);        // duplicates are ignored
    std::int64_t edge_count() const;

    bool operator==(const SideInformationGraph&) const = default;

private:
    int n_;
    std::vector<std::vector<int>> in_sets_;
};

// Plain undirected graph with irreflexive, symmetric adjacency. Neighbor
// lists are kept sorted; duplicate edge insertions are ignored.
class UndirectedGraph {
public:
    explicit UndirectedGraph(int vertex_count,
                             std::int64_t vertex_cap = kDefaultExplicitVertexCap);

    int vertex_count() const { return n_; }
    std::int64_t edge_count() const { return edges_; }
    bool adjacent(int a, int b) const;
    void add_edge(int a, int b);
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }

    bool operator==(const UndirectedGraph& o) const {
        return n_ == o.n_ && adj_ == o.adj_;
    }

private:
    int n_;
    std::int64_t edges_ = 0;
    std::vector<std::vector<int>> adj_;
};

// Bits stored per node: the integer tuple t indexing a confusion graph.
struct BlockLengths {
    std::vector<int> t;

    int size() const { return static_cast<int>(t.size()); }
    int total_bits() const;
    bool operator==(const BlockLengths&) const = default;
    std::string to_display_string() const;  // "1,1,1"
};

// Graph file format (line oriented, '#' comments, LF or CRLF):
//   n <count>     mandatory, before any edge
//   e <i> <j>     directed edge i -> j, 1-indexed  (side-information graphs)
//   u <a> <b>     undirected edge, 1-indexed       (explicit undirected graphs)
// A file holds either e-lines or u-lines, never both.
SideInformationGraph parse_side_information_graph(const std::string& text);
UndirectedGraph parse_undirected_graph(
    const std::string& text, std::int64_t vertex_cap = kDefaultExplicitVertexCap);

// True if the first edge line is a u-line (empty files count as directed).
bool graph_file_is_undirected(const std::string& text);

std::string serialize(const SideInformationGraph& g);
std::string serialize(const UndirectedGraph& g);

// Each ordered pair (i, j), i != j, becomes an edge independently with
// probability p, deterministically from the seed.
SideInformationGraph random_digraph(int n, double p, std::uint64_t seed);

// Erdos-Renyi undirected graph, same determinism contract.
UndirectedGraph random_undirected_graph(int n, double p, std::uint64_t seed);

// Disjunctive product: vertices are pairs (u1, u2) at index u1*|V(g2)|+u2;
// (u1,u2) ~ (v1,v2) iff u1 ~ v1 or u2 ~ v2.
UndirectedGraph disjunctive_product(const UndirectedGraph& g1, const UndirectedGraph& g2,
                                    std::int64_t vertex_cap = kDefaultExplicitVertexCap);

UndirectedGraph complete_graph(int n);
UndirectedGraph cycle_graph(int n);
UndirectedGraph edgeless_graph(int n);
// C_n as a bidirected side-information graph (each node sees both neighbors).
SideInformationGraph bidirected_cycle(int n);
SideInformationGraph complete_bidirected(int n);

}  // namespace confdual
