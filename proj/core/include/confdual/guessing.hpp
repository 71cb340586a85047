#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confdual/confusion.hpp"
#include "confdual/graph.hpp"
#include "confdual/rational.hpp"

namespace confdual {

// One guessing game position: every player j sees the blocks of its
// in-neighbors and commits to a total guess table for its own block. The
// winning set W collects the tuples on which every player is right at
// once; it is always an independent set of the confusion graph.
struct GuessingStrategy {
    BlockLengths t;
    std::vector<std::uint32_t> block_masks;
    std::vector<std::uint32_t> side_masks;
    std::vector<std::vector<std::uint32_t>> guess_tables;  // [n][obs] -> block bits
    std::vector<std::uint32_t> winning_set;                // ascending
    Rational p_win;   // |W| / 2^{sum t}
    Rational p_rand;  // 1 / 2^{sum t}

    int total_bits() const { return t.total_bits(); }
};

struct GuessingOptions {
    int total_bit_cap = kDefaultTotalBitCap;  // exhaustive scan cap
    bool allow_sampling = false;              // past the cap: sample or refuse
    std::int64_t samples = 1 << 16;
    std::uint64_t seed = 1;
    int threads = 1;
};

// evaluate_strategy output. Exhaustive mode fills the strategy's winning
// set and exact p_win; sampling mode leaves those empty and reports an
// unbiased estimate with a 95% normal-approximation radius instead. Sampled
// numbers never feed exact identities.
struct GuessingEvaluation {
    GuessingStrategy strategy;
    bool exhaustive = true;
    Rational p_win_estimate;  // sampling only: wins / samples, exact fraction
    double radius95 = 0.0;
    std::int64_t samples = 0;
};

// Exact guessing numbers of an evaluated strategy, base s = 2^{(sum t)/n}:
// k = log_s(p_win/p_rand) = n log2|W| / sum t and k' = n - k. An empty
// winning set has no finite k; `finite` is the marker.
struct GuessingResult {
    bool finite = true;
    AffineLog k;
    AffineLog k_complement;
};

// Projection tables of an independent set, all-zero guesses elsewhere; the
// winning set always contains s. Throws InvalidInput naming a confusable
// pair and node when s is not independent.
GuessingStrategy strategy_from_independent_set(const SideInformationGraph& g,
                                               const BlockLengths& t,
                                               const std::vector<std::uint32_t>& s,
                                               const GuessingOptions& opts = {});

GuessingEvaluation evaluate_strategy(const SideInformationGraph& g, const BlockLengths& t,
                                     const std::vector<std::vector<std::uint32_t>>& guess_tables,
                                     const GuessingOptions& opts = {});

GuessingResult guessing_numbers(const GuessingStrategy& strategy);

// Certified lower bound on the optimal guessing number: max over the
// enumerated tuples of n log2 alpha(Gamma_t) / sum t, exact comparison,
// witness independent set recorded.
struct GuessingBound {
    AffineLog value;
    BlockLengths witness_t;
    std::int64_t witness_alpha = 0;
    std::vector<std::uint32_t> witness_set;
    std::string exhausted_range;
};

GuessingBound optimal_guessing_bound(const SideInformationGraph& g,
                                     const std::vector<BlockLengths>& t_enum,
                                     const GuessingOptions& opts = {});

// Per-tuple bridge to the sum-rate quantities: the k bound at t equals
// n / (sum t / log2 alpha) and the k' bound equals n / (sum t / log2 chi_f),
// both exactly. Routed through a maximum independent set, an evaluated
// strategy, and the log-form comparators rather than symbol pushing.
// Not applicable when alpha = 1 (no storage-side pairing).
struct Theorem3Report {
    bool applicable = false;
    bool k_identity = false;
    bool corollary = false;
};

Theorem3Report theorem3_check(const SideInformationGraph& g, const BlockLengths& t,
                              const GuessingOptions& opts = {});

// JSON round-trip: per-player observation-to-guess tables keyed by
// fixed-width hex observations. Import re-derives the winning set and
// probabilities exhaustively from the stored masks and tables.
std::string to_json(const GuessingStrategy& strategy);
GuessingStrategy strategy_from_json(const std::string& text);

}  // namespace confdual
