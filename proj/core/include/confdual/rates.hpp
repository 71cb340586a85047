#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confdual/confusion.hpp"
#include "confdual/graph.hpp"
#include "confdual/rational.hpp"

namespace confdual {

// Direction vector lambda or weight vector mu: one nonnegative rational per
// node. Directions must not be all zero; weights may be.
struct WeightVector {
    std::vector<Rational> entries;

    int size() const { return static_cast<int>(entries.size()); }
    bool all_zero() const;
    Rational sum() const;
    std::string to_display_string() const;  // "1,1/2,0"
};

// "1,1/2,0" with one entry per node. Throws ParseError on malformed text or
// negative entries.
WeightVector parse_weight_vector(const std::string& text);

enum class BoundDirection { kLower, kUpper };

// One certified one-sided bound obtained from a finite enumeration. The
// value is kept in exact log-form (coeff / log2 base); witness fields say
// which point of the enumeration achieved it. Capacity bounds are
// achievable from below, storage-rate bounds from above, so each bound is a
// certificate, never an estimate. An infinite value marks an infeasible
// direction (storage with alpha = 1 everywhere) or an unconstrained one
// (capacity with an edgeless confusion graph).
struct RateBound {
    std::string quantity;
    BoundDirection direction = BoundDirection::kLower;
    RateValue value;
    BlockLengths witness_t;                   // empty when nothing was admitted
    std::int64_t witness_r = 0;               // 0 when not indexed by r
    std::int64_t witness_alpha = 0;           // alpha(Gamma_t) at the witness
    std::vector<std::uint32_t> witness_set;   // a maximum independent set there
    std::string exhausted_range;
};

struct RatesOptions {
    int total_bit_cap = kDefaultTotalBitCap;
    double timeout_seconds = 0.0;  // 0 disables the deadline
    int threads = 1;               // enumeration fan-out; reduction order is fixed
};

// max over admitted r of r / log2 chi_f(Gamma_{r lambda}), chi_f by the
// transitivity shortcut 2^{sum rl_i} / alpha. Candidates r that do not make
// r*lambda integral are skipped and recorded. Also asserts the scaling
// monotonicity value(m*r) >= value(r) for every admitted pair in the range.
// Throws InvalidInput when no candidate is admitted, LimitError on caps.
RateBound capacity_lower_bound(const SideInformationGraph& g, const WeightVector& lambda,
                               const std::vector<std::int64_t>& r_range,
                               const RatesOptions& opts = {});

// min over admitted r of r / log2 alpha(Gamma_{r lambda}). Points with
// alpha = 1 carry no codebook and are skipped; if every admitted r lands
// there the bound is +infinity (direction infeasible for storage).
RateBound storage_rate_upper_bound(const SideInformationGraph& g, const WeightVector& lambda,
                                   const std::vector<std::int64_t>& r_range,
                                   const RatesOptions& opts = {});

// Exact check of log2 chi_f + log2 alpha = sum of r*lambda_i at one point,
// with chi_f recomputed by the covering LP on the explicit confusion graph
// so the two factors come from independent code paths.
bool duality_identity_check(const SideInformationGraph& g, const WeightVector& lambda,
                            std::int64_t r, const RatesOptions& opts = {});

// 1/C(lambda) = sum lambda_i - 1/R(lambda), checked on a pair of bounds.
// With both bounds at the same witness r the identity is exact and `exact`
// is set. Otherwise the report carries the residual 1/C + 1/R - sum lambda:
// its exact sign, and a rational enclosure [residual_lo, residual_hi].
struct Theorem1Report {
    bool same_witness = false;
    bool exact = false;
    int residual_sign = 0;
    Rational residual_lo;
    Rational residual_hi;
    std::string detail;
};

Theorem1Report theorem1_complementarity(const RateBound& capacity_lower,
                                        const RateBound& storage_upper,
                                        const WeightVector& lambda);

// Sum-rate bounds over an explicit tuple enumeration plus the Theorem 2
// pairing 1/C_sum = 1 - 1/R_sum. The pairing is exact per tuple; the report
// records whether every enumerated tuple with alpha > 1 passed, and the
// residual of the selected pair of bounds (zero when both optima sit at the
// same tuple).
struct SumRateReport {
    RateBound c_sum_lower;
    RateBound r_sum_upper;
    bool same_witness = false;
    bool per_point_identity = false;
    int residual_sign = 0;
    Rational residual_lo;
    Rational residual_hi;
};

SumRateReport sum_capacity_bounds(const SideInformationGraph& g,
                                  const std::vector<BlockLengths>& t_enum,
                                  const RatesOptions& opts = {});

// mu-weighted variants: max over t of (sum mu_i t_i)/log2 chi_f and min
// over t with alpha > 1 of (sum mu_i t_i)/log2 alpha.
struct WeightedSumReport {
    RateBound c_lower;
    RateBound r_upper;
};

WeightedSumReport weighted_sum_bounds(const SideInformationGraph& g, const WeightVector& mu,
                                      const std::vector<BlockLengths>& t_enum,
                                      const RatesOptions& opts = {});

// One enumerated tuple with its achievable corner points: capacity
// coordinate j is t_j / log2 chi_f, storage coordinate j is t_j / log2
// alpha. The capacity point is undefined when the confusion graph has no
// edges (chi_f = 1, any rate achievable); the storage point when alpha = 1.
struct RegionPoint {
    BlockLengths t;
    std::int64_t alpha = 0;
    Rational chi_f;
    bool capacity_defined = false;
    bool storage_defined = false;
    std::vector<RateValue> capacity;
    std::vector<RateValue> storage;
};

std::vector<RegionPoint> region_sample(const SideInformationGraph& g, const BlockLengths& t_max,
                                       const RatesOptions& opts = {});

// All tuples 0 <= t <= t_max except the all-zero tuple, ascending
// lexicographic with the last coordinate fastest.
std::vector<BlockLengths> enumerate_tuples(const BlockLengths& t_max);

}  // namespace confdual
