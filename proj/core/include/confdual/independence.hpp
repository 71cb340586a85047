#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "confdual/confusion.hpp"
#include "confdual/graph.hpp"
#include "confdual/rational.hpp"

namespace confdual {

inline constexpr std::int64_t kDefaultSolverVertexCap = std::int64_t(1) << 13;

// Confusion-graph search strategy. kOrbit merges symmetric branches at the
// top of the tree, kSuffix runs an incremental suffix-clique table in
// ascending tuple order, kAuto picks by instance shape.
enum class ConfusionEngine { kAuto, kOrbit, kSuffix };

struct IndependenceOptions {
    std::int64_t vertex_cap = kDefaultSolverVertexCap;
    double timeout_seconds = 0.0;  // 0 disables the deadline
    ConfusionEngine engine = ConfusionEngine::kAuto;
};

struct IndependenceCertificate {
    int alpha = 0;
    std::vector<int> witness;  // sorted ascending
    std::int64_t nodes_explored = 0;
};

struct TupleIndependenceCertificate {
    std::int64_t alpha = 0;
    std::vector<std::uint32_t> witness;  // tuples, sorted ascending
    std::int64_t nodes_explored = 0;
};

struct WeightedIndependenceResult {
    Rational weight;
    std::vector<int> witness;  // sorted ascending
    bool stopped_early = false;
    std::int64_t nodes_explored = 0;
};

// Exact maximum independent set via branch and bound on the complement
// (max clique with a greedy-coloring bound over bitset candidate rows).
// Deterministic; throws TimeoutError when the deadline passes rather than
// returning an uncertified value.
IndependenceCertificate max_independent_set(const UndirectedGraph& g,
                                            const IndependenceOptions& opts = {});

// Confusion-graph variant. Translation invariance puts some maximum
// independent set through the zero tuple, so the search runs on the diffs
// that are not confusable with zero instead of all 2^{Σt} vertices.
TupleIndependenceCertificate max_independent_set(const ConfusionGraph& cg,
                                                 const IndependenceOptions& opts = {});

// Exact maximum-weight independent set, nonnegative rational weights. When
// stop_above is set the search may return any set with weight > stop_above
// instead of the maximum (stopped_early = true); used as the LP pricing
// fast path. A completed search is always the exact optimum.
WeightedIndependenceResult max_weight_independent_set(const UndirectedGraph& g,
                                                      const std::vector<Rational>& w,
                                                      const IndependenceOptions& opts = {},
                                                      const Rational* stop_above = nullptr);

bool is_independent(const UndirectedGraph& g, const std::vector<int>& s);
bool is_independent(const ConfusionGraph& cg, const std::vector<std::uint32_t>& s);

// Reusable solver over one fixed graph: builds the complement rows once and
// answers repeated weighted queries. Pricing interface for the covering LP.
class IndependentSetOracle {
public:
    explicit IndependentSetOracle(const UndirectedGraph& g, IndependenceOptions opts = {});
    ~IndependentSetOracle();
    IndependentSetOracle(IndependentSetOracle&&) noexcept;
    IndependentSetOracle& operator=(IndependentSetOracle&&) noexcept;

    WeightedIndependenceResult max_weight(const std::vector<Rational>& w,
                                          const Rational* stop_above = nullptr) const;
    IndependenceCertificate max_cardinality() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace confdual
