#include "confdual/confusion.hpp"

#include <algorithm>
#include <string>

#include "confdual/errors.hpp"

namespace confdual {

namespace {

// Masks for node j's own block and for the union of its in-neighbors'
// blocks, under the layout where node 0's block sits at the most
// significant end.
struct Layout {
    int total_bits;
    std::vector<std::uint32_t> block;
    std::vector<std::uint32_t> side;
};

Layout make_layout(const SideInformationGraph& g, const BlockLengths& t) {
    if (t.size() != g.node_count())
        throw InvalidInput("block-length tuple has " + std::to_string(t.size()) +
                           " entries for a graph with " + std::to_string(g.node_count()) +
                           " nodes");
    for (int x : t.t)
        if (x < 0) throw InvalidInput("block length must be nonnegative");

    Layout lay;
    lay.total_bits = 0;
    for (int x : t.t) lay.total_bits += x;
    if (lay.total_bits > 32)
        throw LimitError("total bits " + std::to_string(lay.total_bits) +
                         " exceeds the 32-bit tuple word");

    std::vector<int> offset(g.node_count());
    int pos = 0;
    for (int j = 0; j < g.node_count(); ++j) {
        offset[j] = pos;
        pos += t.t[j];
    }
    lay.block.resize(g.node_count());
    for (int j = 0; j < g.node_count(); ++j) {
        std::uint32_t m = 0;
        for (int b = 0; b < t.t[j]; ++b)
            m |= std::uint32_t(1) << (lay.total_bits - 1 - (offset[j] + b));
        lay.block[j] = m;
    }
    lay.side.resize(g.node_count());
    for (int j = 0; j < g.node_count(); ++j) {
        std::uint32_t m = 0;
        for (int i : g.in_set(j)) m |= lay.block[i];
        lay.side[j] = m;
    }
    return lay;
}

}  // namespace

ConfusionGraph::ConfusionGraph(SideInformationGraph base, BlockLengths t, int total_bit_cap)
    : base_(std::move(base)), t_(std::move(t)) {
    Layout lay = make_layout(base_, t_);
    if (lay.total_bits > total_bit_cap)
        throw LimitError("total bits " + std::to_string(lay.total_bits) + " exceeds cap " +
                         std::to_string(total_bit_cap));
    total_bits_ = lay.total_bits;
    block_masks_ = std::move(lay.block);
    side_masks_ = std::move(lay.side);

    const std::uint32_t space = std::uint32_t(1) << total_bits_;
    diff_bitmap_.assign(space, false);
    for (std::uint32_t d = 1; d < space; ++d) {
        for (int j = 0; j < base_.node_count(); ++j) {
            if ((d & block_masks_[j]) != 0 && (d & side_masks_[j]) == 0) {
                diff_bitmap_[d] = true;
                diffs_.push_back(d);
                break;
            }
        }
    }
}

TupleLayout tuple_layout(const SideInformationGraph& g, const BlockLengths& t) {
    Layout lay = make_layout(g, t);
    return {lay.total_bits, std::move(lay.block), std::move(lay.side)};
}

bool confusable(std::uint32_t x, std::uint32_t z, const SideInformationGraph& g,
                const BlockLengths& t) {
    Layout lay = make_layout(g, t);
    const std::uint32_t space_mask =
        lay.total_bits == 32 ? ~std::uint32_t(0) : (std::uint32_t(1) << lay.total_bits) - 1;
    if ((x & ~space_mask) != 0 || (z & ~space_mask) != 0)
        throw InvalidInput("tuple does not fit in " + std::to_string(lay.total_bits) + " bits");
    for (int j = 0; j < g.node_count(); ++j) {
        if ((x & lay.block[j]) == (z & lay.block[j])) continue;
        bool agrees = true;
        for (int i : g.in_set(j))
            if ((x & lay.block[i]) != (z & lay.block[i])) {
                agrees = false;
                break;
            }
        if (agrees) return true;
    }
    return false;
}

ConfusionGraph build_confusion_graph(const SideInformationGraph& g, const BlockLengths& t,
                                     int total_bit_cap) {
    return ConfusionGraph(g, t, total_bit_cap);
}

bool translation_automorphism_check(
    const ConfusionGraph& cg, std::uint32_t c,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& sample) {
    const std::uint32_t space_mask =
        cg.total_bits() == 32 ? ~std::uint32_t(0)
                              : (std::uint32_t(1) << cg.total_bits()) - 1;
    if ((c & ~space_mask) != 0) throw InvalidInput("translation tuple out of range");
    for (auto [x, z] : sample) {
        if ((x | z) & ~space_mask) throw InvalidInput("sample tuple out of range");
        if (cg.adjacent(x, z) != cg.adjacent(x ^ c, z ^ c)) return false;
    }
    return true;
}

UndirectedGraph to_explicit(const ConfusionGraph& cg, std::int64_t vertex_cap) {
    if (cg.vertex_count() > vertex_cap)
        throw LimitError("confusion graph has " + std::to_string(cg.vertex_count()) +
                         " vertices, explicit cap is " + std::to_string(vertex_cap));
    const std::uint32_t space = static_cast<std::uint32_t>(cg.vertex_count());
    UndirectedGraph g(static_cast<int>(space), vertex_cap);
    for (std::uint32_t x = 0; x < space; ++x)
        for (std::uint32_t d : cg.confusable_diffs()) {
            const std::uint32_t z = x ^ d;
            if (z > x) g.add_edge(static_cast<int>(x), static_cast<int>(z));
        }
    return g;
}

std::optional<std::vector<std::uint32_t>> xor_difference_set(const UndirectedGraph& g) {
    const int n = g.vertex_count();
    if (n < 1 || (n & (n - 1)) != 0) return std::nullopt;
    std::vector<std::uint32_t> diffs;
    std::vector<char> in_diffs(n, 0);
    for (int u : g.neighbors(0)) {
        diffs.push_back(static_cast<std::uint32_t>(u));
        in_diffs[u] = 1;
    }
    // Matching degrees plus every edge difference landing in the candidate
    // set force neighbors(v) = {v ^ d} exactly.
    for (int v = 0; v < n; ++v) {
        if (g.degree(v) != static_cast<int>(diffs.size())) return std::nullopt;
        for (int u : g.neighbors(v))
            if (!in_diffs[u ^ v]) return std::nullopt;
    }
    std::sort(diffs.begin(), diffs.end());
    return diffs;
}

}  // namespace confdual
