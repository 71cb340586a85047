#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confdual/confusion.hpp"
#include "confdual/graph.hpp"

namespace confdual {

// Entries of decoder and recovery tables that no input ever reaches. Block
// values fit in total_bits < 32 bits, so the sentinel is unambiguous.
inline constexpr std::uint32_t kTableUndefined = ~std::uint32_t(0);

// Broadcast code: phi maps every message tuple to an r-bit index, psi_j
// recovers block j from the index and the blocks j already sees. Both are
// explicit lookup tables; side and block masks travel with the code so a
// deserialized instance verifies without its source graph.
struct IndexCode {
    BlockLengths t;
    int r = 0;
    std::vector<std::uint32_t> block_masks;
    std::vector<std::uint32_t> side_masks;
    std::vector<std::uint32_t> encoder;                // size 2^{total bits}
    std::vector<std::vector<std::uint32_t>> decoders;  // [n][index << side bits | obs]

    int total_bits() const { return t.total_bits(); }
};

// Storage code: an injective codebook plus per-node recovery tables defined
// exactly on codebook projections; everything off the codebook is
// kTableUndefined and querying it is an error.
struct StorageCode {
    BlockLengths t;
    int r = 0;
    std::vector<std::uint32_t> block_masks;
    std::vector<std::uint32_t> side_masks;
    std::vector<std::uint32_t> codebook;               // 2^r tuples, ascending
    std::vector<std::vector<std::uint32_t>> recovery;  // [n][obs]

    int total_bits() const { return t.total_bits(); }
};

// Proper-coloring achievability made executable: r = ceil(log2 K) for K
// distinct colors, the encoder broadcasts the color class, and each decoder
// resolves the unique preimage consistent with its side information. Throws
// InvalidInput naming a violating edge when the coloring is not proper.
IndexCode index_code_from_coloring(const SideInformationGraph& g, const BlockLengths& t,
                                   const std::vector<int>& coloring,
                                   int total_bit_cap = kDefaultTotalBitCap);

// Independent-set achievability: r = floor(log2 |s|), the codebook keeps
// the first 2^r members of s in ascending order, recovery tables are the
// codebook projections. Throws InvalidInput naming a confusable pair and
// the node that confuses them when s is not independent.
StorageCode storage_code_from_independent_set(const SideInformationGraph& g,
                                              const BlockLengths& t,
                                              const std::vector<std::uint32_t>& s,
                                              int total_bit_cap = kDefaultTotalBitCap);

// Erases block `failed` of codeword m and reconstructs it from the blocks
// the failed node sees. Throws InvalidInput on a bad message index or node,
// Error when the recovery table has no entry for the observation.
std::uint32_t simulate_failure(const StorageCode& code, std::int64_t m, int failed);

struct CodeReport {
    bool pass = false;
    std::int64_t checked = 0;
    std::string counterexample;  // empty on pass
};

// Exhaustive contract checks. The index-code version replays every message
// tuple through every decoder; the storage version checks injectivity,
// pairwise independence of the codebook, and every recovery entry.
CodeReport verify_code(const IndexCode& code);
CodeReport verify_code(const StorageCode& code);

// JSON round-trip. Tuples are fixed-width hex strings; re-serializing a
// parsed document reproduces it byte for byte.
std::string to_json(const IndexCode& code);
std::string to_json(const StorageCode& code);
IndexCode index_code_from_json(const std::string& text);
StorageCode storage_code_from_json(const std::string& text);
// Peeks at the "kind" field: "index" or "storage".
std::string code_kind_from_json(const std::string& text);

}  // namespace confdual
