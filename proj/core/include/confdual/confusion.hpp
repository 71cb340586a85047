#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "confdual/graph.hpp"

namespace confdual {

inline constexpr int kDefaultTotalBitCap = 20;

// Confusion graph of a side-information graph at block lengths t, kept in
// difference form. Vertices are all 2^{Σt} bit-tuples; tuple x gives node j
// the bits at positions [offset_j, offset_j + t_j) counted from the most
// significant end of a Σt-bit word. Two tuples are adjacent iff their XOR
// lies in confusable_diffs, so adjacency is translation invariant.
class ConfusionGraph {
public:
    ConfusionGraph(SideInformationGraph base, BlockLengths t, int total_bit_cap);

    const SideInformationGraph& base() const { return base_; }
    const BlockLengths& block_lengths() const { return t_; }
    int total_bits() const { return total_bits_; }
    std::int64_t vertex_count() const { return std::int64_t(1) << total_bits_; }
    const std::vector<std::uint32_t>& confusable_diffs() const { return diffs_; }
    std::int64_t degree() const { return static_cast<std::int64_t>(diffs_.size()); }
    std::int64_t edge_count() const { return vertex_count() * degree() / 2; }

    // Bits of node j within a tuple word (zero when t_j = 0).
    std::uint32_t block_mask(int j) const { return block_masks_[j]; }
    // Union of the blocks of j's in-neighborhood.
    std::uint32_t side_mask(int j) const { return side_masks_[j]; }

    bool adjacent(std::uint32_t x, std::uint32_t z) const {
        return x != z && confusable_diff(x ^ z);
    }
    bool confusable_diff(std::uint32_t d) const { return d != 0 && diff_bitmap_[d]; }

private:
    SideInformationGraph base_;
    BlockLengths t_;
    int total_bits_;
    std::vector<std::uint32_t> block_masks_;
    std::vector<std::uint32_t> side_masks_;
    std::vector<std::uint32_t> diffs_;
    std::vector<bool> diff_bitmap_;
};

// Definition-direct confusability test: true iff some node j has x_j != z_j
// while x and z agree on all of A_j. Independent of ConfusionGraph's
// difference set; used to cross-check it.
bool confusable(std::uint32_t x, std::uint32_t z, const SideInformationGraph& g,
                const BlockLengths& t);

ConfusionGraph build_confusion_graph(const SideInformationGraph& g, const BlockLengths& t,
                                     int total_bit_cap = kDefaultTotalBitCap);

// Block and side masks of the tuple word alone, no difference set. Cheap at
// any width up to 32 bits; the sampling paths need only this much.
struct TupleLayout {
    int total_bits = 0;
    std::vector<std::uint32_t> block_masks;
    std::vector<std::uint32_t> side_masks;
};

TupleLayout tuple_layout(const SideInformationGraph& g, const BlockLengths& t);

// Self-test of the representation: for every pair (x, z) in sample, checks
// x ~ z iff (x xor c) ~ (z xor c). True by construction; returns false only
// if the difference-set representation is broken.
bool translation_automorphism_check(
    const ConfusionGraph& cg, std::uint32_t c,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& sample);

UndirectedGraph to_explicit(const ConfusionGraph& cg,
                            std::int64_t vertex_cap = kDefaultExplicitVertexCap);

// Recovers translation structure from an explicit graph: when the vertex
// count is a power of two and u ~ v depends only on u xor v, returns the
// difference set, ascending. Solvers use it to run the same difference-space
// reduction on graphs that arrive without their ConfusionGraph pedigree.
std::optional<std::vector<std::uint32_t>> xor_difference_set(const UndirectedGraph& g);

// Bits of x selected by mask, compacted toward bit zero in ascending mask
// order. Projects a tuple onto a block or side-information mask.
inline std::uint32_t extract_bits(std::uint32_t x, std::uint32_t mask) {
    std::uint32_t out = 0;
    int k = 0;
    for (std::uint32_t m = mask; m != 0; m &= m - 1, ++k)
        if (x & (m & -m)) out |= std::uint32_t(1) << k;
    return out;
}

}  // namespace confdual
