#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "confdual/confusion.hpp"
#include "confdual/graph.hpp"
#include "confdual/rational.hpp"

namespace confdual {

// Vertex counts accepted by the exact LP and by exact coloring search.
inline constexpr std::int64_t kDefaultLpVertexCap = 1 << 12;
inline constexpr std::int64_t kDefaultColoringVertexCap = 1 << 10;

struct FracChromOptions {
    std::int64_t lp_vertex_cap = kDefaultLpVertexCap;
    std::int64_t coloring_vertex_cap = kDefaultColoringVertexCap;
    double timeout_seconds = 0.0;  // 0 disables the deadline
};

// A weighted family of independent sets covering every vertex to total
// weight at least one. value is the sum of the weights.
struct FractionalColoring {
    std::vector<std::pair<std::vector<int>, Rational>> columns;
    Rational value;
};

struct ChromaticResult {
    Rational chi_f;
    FractionalColoring coloring;           // primal certificate
    std::vector<Rational> optimality_proof;  // dual weights, one per vertex
    std::int64_t pricing_rounds = 0;
};

// Exact fractional chromatic number by column generation over independent
// sets. Both certificates are verified before returning.
ChromaticResult fractional_chromatic_lp(const UndirectedGraph& g,
                                        const FracChromOptions& opts = {});

// |V|/alpha for confusion graphs, which are vertex transitive.
Rational fractional_chromatic_transitive(const ConfusionGraph& cg,
                                         const FracChromOptions& opts = {});

// Exact chromatic number. When coloring_out is non-null it receives a
// proper coloring with values 0..chi-1.
int chromatic_number(const UndirectedGraph& g, const FracChromOptions& opts = {},
                     std::vector<int>* coloring_out = nullptr);

// Upper bound on the b-fold chromatic number: exact on small graphs via the
// lexicographic blow-up, greedy beyond that. The returned value divided by b
// never falls below chi_f.
int b_fold_chromatic_upper(const UndirectedGraph& g, int b,
                           const FracChromOptions& opts = {});

}  // namespace confdual
