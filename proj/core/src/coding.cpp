#include "confdual/coding.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "confdual/errors.hpp"

namespace confdual {

namespace {

using nlohmann::json;

std::string hex_word(std::uint32_t v, int width) {
    static const char* digits = "0123456789abcdef";
    std::string out(static_cast<std::size_t>(width), '0');
    for (int i = width - 1; i >= 0; --i, v >>= 4) out[i] = digits[v & 0xf];
    return out;
}

int hex_width(int bits) { return std::max(1, (bits + 3) / 4); }

std::uint32_t parse_hex(const std::string& s) {
    if (s.empty() || s.size() > 8) throw ParseError("bad hex word '" + s + "'");
    std::uint32_t v = 0;
    for (char c : s) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else throw ParseError("bad hex word '" + s + "'");
        v = v << 4 | static_cast<std::uint32_t>(d);
    }
    return v;
}

// The node that cannot tell two tuples at difference d apart, or -1.
int confusing_node(std::uint32_t d, const std::vector<std::uint32_t>& block_masks,
                   const std::vector<std::uint32_t>& side_masks) {
    for (std::size_t j = 0; j < block_masks.size(); ++j)
        if ((d & block_masks[j]) != 0 && (d & side_masks[j]) == 0) return static_cast<int>(j);
    return -1;
}

void check_masks(const BlockLengths& t, const std::vector<std::uint32_t>& block_masks,
                 const std::vector<std::uint32_t>& side_masks, std::string* fault) {
    const int n = t.size();
    const int total = t.total_bits();
    auto fail = [&](const std::string& why) {
        if (fault) *fault = why;
        else throw InvalidInput(why);
    };
    if (static_cast<int>(block_masks.size()) != n || static_cast<int>(side_masks.size()) != n)
        return fail("mask arrays do not match the tuple length");
    std::uint32_t seen = 0;
    for (int j = 0; j < n; ++j) {
        if (std::popcount(block_masks[j]) != t.t[j])
            return fail("block mask width disagrees with t at node " + std::to_string(j + 1));
        if ((block_masks[j] & seen) != 0) return fail("block masks overlap");
        if ((side_masks[j] & block_masks[j]) != 0)
            return fail("side mask includes the node's own block");
        seen |= block_masks[j];
    }
    const std::uint32_t space_mask =
        total == 32 ? ~std::uint32_t(0) : (std::uint32_t(1) << total) - 1;
    if (seen != space_mask) return fail("block masks do not tile the tuple");
    for (int j = 0; j < n; ++j)
        if ((side_masks[j] & ~space_mask) != 0) return fail("side mask out of range");
}

std::string tuple_hex(std::uint32_t x, int total) { return hex_word(x, hex_width(total)); }

json table_to_json(const std::vector<std::uint32_t>& table, int key_bits, int value_bits) {
    json out = json::object();
    for (std::size_t k = 0; k < table.size(); ++k)
        if (table[k] != kTableUndefined)
            out[hex_word(static_cast<std::uint32_t>(k), hex_width(key_bits))] =
                hex_word(table[k], hex_width(value_bits));
    return out;
}

std::vector<std::uint32_t> table_from_json(const json& obj, int key_bits, int value_bits) {
    if (key_bits > 26) throw LimitError("lookup table too large to materialize");
    std::vector<std::uint32_t> table(std::size_t(1) << key_bits, kTableUndefined);
    for (const auto& [key, value] : obj.items()) {
        const std::uint32_t k = parse_hex(key);
        const std::uint32_t v = parse_hex(value.get<std::string>());
        if (k >= table.size()) throw ParseError("table key out of range: " + key);
        if (value_bits < 32 && v >> value_bits)
            throw ParseError("table value out of range: " + value.get<std::string>());
        table[k] = v;
    }
    return table;
}

json masks_to_json(const std::vector<std::uint32_t>& masks, int total) {
    json out = json::array();
    for (std::uint32_t m : masks) out.push_back(tuple_hex(m, total));
    return out;
}

std::vector<std::uint32_t> masks_from_json(const json& arr) {
    std::vector<std::uint32_t> out;
    for (const auto& v : arr) out.push_back(parse_hex(v.get<std::string>()));
    return out;
}

BlockLengths t_from_json(const json& arr) {
    BlockLengths t;
    for (const auto& v : arr) t.t.push_back(v.get<int>());
    if (t.total_bits() > kDefaultTotalBitCap) throw LimitError("tuple too wide to materialize");
    return t;
}

json parse_document(const std::string& text, const char* expected_kind) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("malformed code document");
    if (doc.value("schema", "") != "1") throw ParseError("unsupported schema");
    if (doc.value("kind", "") != expected_kind)
        throw ParseError(std::string("expected a ") + expected_kind + " code document");
    return doc;
}

}  // namespace

IndexCode index_code_from_coloring(const SideInformationGraph& g, const BlockLengths& t,
                                   const std::vector<int>& coloring, int total_bit_cap) {
    const ConfusionGraph cg = build_confusion_graph(g, t, total_bit_cap);
    const std::uint32_t space = std::uint32_t(1) << cg.total_bits();
    if (coloring.size() != space)
        throw InvalidInput("coloring has " + std::to_string(coloring.size()) + " entries for " +
                           std::to_string(space) + " tuples");
    for (std::uint32_t x = 0; x < space; ++x)
        for (std::uint32_t d : cg.confusable_diffs()) {
            const std::uint32_t z = x ^ d;
            if (z > x && coloring[x] == coloring[z])
                throw InvalidInput("coloring is not proper: tuples 0x" +
                                   tuple_hex(x, cg.total_bits()) + " and 0x" +
                                   tuple_hex(z, cg.total_bits()) + " are confusable and share color " +
                                   std::to_string(coloring[x]));
        }

    std::map<int, std::uint32_t> remap;
    for (int c : coloring) remap.emplace(c, 0);
    std::uint32_t next = 0;
    for (auto& [c, id] : remap) id = next++;
    const std::uint32_t classes = next;

    IndexCode code;
    code.t = cg.block_lengths();
    code.r = classes <= 1 ? 0 : std::bit_width(classes - 1);
    for (int j = 0; j < g.node_count(); ++j) {
        code.block_masks.push_back(cg.block_mask(j));
        code.side_masks.push_back(cg.side_mask(j));
    }
    code.encoder.resize(space);
    for (std::uint32_t x = 0; x < space; ++x) code.encoder[x] = remap.at(coloring[x]);

    for (int j = 0; j < g.node_count(); ++j) {
        const int side_bits = std::popcount(code.side_masks[j]);
        if (code.r + side_bits > 26)
            throw LimitError("decoder table for node " + std::to_string(j + 1) +
                             " would need 2^" + std::to_string(code.r + side_bits) + " entries");
        std::vector<std::uint32_t> table(std::size_t(1) << (code.r + side_bits),
                                         kTableUndefined);
        for (std::uint32_t x = 0; x < space; ++x) {
            const std::size_t key = (std::size_t(code.encoder[x]) << side_bits) |
                                    extract_bits(x, code.side_masks[j]);
            const std::uint32_t block = extract_bits(x, code.block_masks[j]);
            if (table[key] != kTableUndefined && table[key] != block)
                throw Error("proper coloring produced an ambiguous decoder entry");
            table[key] = block;
        }
        code.decoders.push_back(std::move(table));
    }

    const CodeReport report = verify_code(code);
    if (!report.pass) throw Error("constructed index code failed verification: " +
                                  report.counterexample);
    return code;
}

StorageCode storage_code_from_independent_set(const SideInformationGraph& g,
                                              const BlockLengths& t,
                                              const std::vector<std::uint32_t>& s,
                                              int total_bit_cap) {
    const ConfusionGraph cg = build_confusion_graph(g, t, total_bit_cap);
    if (s.empty()) throw InvalidInput("independent set is empty");
    std::vector<std::uint32_t> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidInput("duplicate tuple in the independent set");
    if (sorted.back() >> cg.total_bits())
        throw InvalidInput("tuple does not fit in " + std::to_string(cg.total_bits()) + " bits");

    StorageCode code;
    code.t = cg.block_lengths();
    for (int j = 0; j < g.node_count(); ++j) {
        code.block_masks.push_back(cg.block_mask(j));
        code.side_masks.push_back(cg.side_mask(j));
    }
    for (std::size_t i = 0; i < sorted.size(); ++i)
        for (std::size_t k = i + 1; k < sorted.size(); ++k) {
            const std::uint32_t d = sorted[i] ^ sorted[k];
            const int at = cg.confusable_diff(d)
                               ? confusing_node(d, code.block_masks, code.side_masks)
                               : -1;
            if (at >= 0)
                throw InvalidInput("not an independent set: tuples 0x" +
                                   tuple_hex(sorted[i], cg.total_bits()) + " and 0x" +
                                   tuple_hex(sorted[k], cg.total_bits()) +
                                   " are confusable at node " + std::to_string(at + 1));
        }

    code.r = std::bit_width(sorted.size()) - 1;
    code.codebook.assign(sorted.begin(), sorted.begin() + (std::size_t(1) << code.r));

    for (int j = 0; j < g.node_count(); ++j) {
        const int side_bits = std::popcount(code.side_masks[j]);
        std::vector<std::uint32_t> table(std::size_t(1) << side_bits, kTableUndefined);
        for (std::uint32_t c : code.codebook) {
            const std::uint32_t obs = extract_bits(c, code.side_masks[j]);
            const std::uint32_t block = extract_bits(c, code.block_masks[j]);
            if (table[obs] != kTableUndefined && table[obs] != block)
                throw Error("independent codebook produced an ambiguous recovery entry");
            table[obs] = block;
        }
        code.recovery.push_back(std::move(table));
    }

    const CodeReport report = verify_code(code);
    if (!report.pass) throw Error("constructed storage code failed verification: " +
                                  report.counterexample);
    return code;
}

std::uint32_t simulate_failure(const StorageCode& code, std::int64_t m, int failed) {
    if (m < 0 || m >= static_cast<std::int64_t>(code.codebook.size()))
        throw InvalidInput("message index " + std::to_string(m) + " out of range");
    if (failed < 0 || failed >= code.t.size())
        throw InvalidInput("node index " + std::to_string(failed) + " out of range");
    const std::uint32_t surviving = extract_bits(code.codebook[m], code.side_masks[failed]);
    const std::uint32_t block = code.recovery[failed][surviving];
    if (block == kTableUndefined)
        throw Error("recovery table of node " + std::to_string(failed + 1) +
                    " has no entry for observation 0x" +
                    hex_word(surviving, hex_width(std::popcount(code.side_masks[failed]))));
    return block;
}

CodeReport verify_code(const IndexCode& code) {
    CodeReport report;
    check_masks(code.t, code.block_masks, code.side_masks, &report.counterexample);
    if (!report.counterexample.empty()) return report;
    const int total = code.total_bits();
    const std::uint32_t space = std::uint32_t(1) << total;
    if (code.encoder.size() != space) {
        report.counterexample = "encoder table has the wrong size";
        return report;
    }
    if (code.decoders.size() != code.block_masks.size()) {
        report.counterexample = "decoder table count mismatch";
        return report;
    }
    for (std::uint32_t x = 0; x < space; ++x) {
        const std::uint32_t index = code.encoder[x];
        if (code.r < 32 && index >> code.r) {
            report.counterexample =
                "encoder output 0x" + hex_word(index, 8) + " exceeds " +
                std::to_string(code.r) + " bits at tuple 0x" + tuple_hex(x, total);
            return report;
        }
        for (std::size_t j = 0; j < code.decoders.size(); ++j) {
            const int side_bits = std::popcount(code.side_masks[j]);
            const std::size_t key =
                (std::size_t(index) << side_bits) | extract_bits(x, code.side_masks[j]);
            const std::uint32_t expected = extract_bits(x, code.block_masks[j]);
            const std::uint32_t got =
                key < code.decoders[j].size() ? code.decoders[j][key] : kTableUndefined;
            ++report.checked;
            if (got != expected) {
                report.counterexample =
                    "tuple 0x" + tuple_hex(x, total) + ", node " + std::to_string(j + 1) +
                    ": decoded " +
                    (got == kTableUndefined ? std::string("nothing")
                                            : "0x" + hex_word(got, hex_width(code.t.t[j]))) +
                    ", expected 0x" + hex_word(expected, hex_width(code.t.t[j]));
                return report;
            }
        }
    }
    report.pass = true;
    return report;
}

CodeReport verify_code(const StorageCode& code) {
    CodeReport report;
    check_masks(code.t, code.block_masks, code.side_masks, &report.counterexample);
    if (!report.counterexample.empty()) return report;
    const int total = code.total_bits();
    if (code.codebook.size() != std::size_t(1) << code.r) {
        report.counterexample = "codebook does not hold 2^r codewords";
        return report;
    }
    for (std::size_t i = 0; i + 1 < code.codebook.size(); ++i)
        if (code.codebook[i] >= code.codebook[i + 1]) {
            report.counterexample = "codebook not strictly ascending at position " +
                                    std::to_string(i) + " (injectivity)";
            return report;
        }
    if (!code.codebook.empty() && total < 32 && (code.codebook.back() >> total)) {
        report.counterexample = "codeword exceeds the tuple width";
        return report;
    }
    for (std::size_t i = 0; i < code.codebook.size(); ++i)
        for (std::size_t k = i + 1; k < code.codebook.size(); ++k) {
            ++report.checked;
            const int at = confusing_node(code.codebook[i] ^ code.codebook[k],
                                          code.block_masks, code.side_masks);
            if (at >= 0) {
                report.counterexample = "codewords 0x" + tuple_hex(code.codebook[i], total) +
                                        " and 0x" + tuple_hex(code.codebook[k], total) +
                                        " are confusable at node " + std::to_string(at + 1);
                return report;
            }
        }
    if (code.recovery.size() != code.block_masks.size()) {
        report.counterexample = "recovery table count mismatch";
        return report;
    }
    for (std::uint32_t c : code.codebook)
        for (std::size_t j = 0; j < code.recovery.size(); ++j) {
            const std::uint32_t obs = extract_bits(c, code.side_masks[j]);
            const std::uint32_t expected = extract_bits(c, code.block_masks[j]);
            const std::uint32_t got =
                obs < code.recovery[j].size() ? code.recovery[j][obs] : kTableUndefined;
            ++report.checked;
            if (got != expected) {
                report.counterexample =
                    "codeword 0x" + tuple_hex(c, total) + ", node " + std::to_string(j + 1) +
                    ": recovered " +
                    (got == kTableUndefined ? std::string("nothing")
                                            : "0x" + hex_word(got, hex_width(code.t.t[j]))) +
                    ", expected 0x" + hex_word(expected, hex_width(code.t.t[j]));
                return report;
            }
        }
    report.pass = true;
    return report;
}

std::string to_json(const IndexCode& code) {
    const int total = code.total_bits();
    json doc;
    doc["schema"] = "1";
    doc["kind"] = "index";
    doc["t"] = code.t.t;
    doc["r"] = code.r;
    doc["block_masks"] = masks_to_json(code.block_masks, total);
    doc["side_masks"] = masks_to_json(code.side_masks, total);
    json enc = json::array();
    for (std::uint32_t v : code.encoder) enc.push_back(hex_word(v, hex_width(code.r)));
    doc["encoder"] = std::move(enc);
    json decs = json::array();
    for (std::size_t j = 0; j < code.decoders.size(); ++j)
        decs.push_back(table_to_json(code.decoders[j],
                                     code.r + std::popcount(code.side_masks[j]),
                                     code.t.t[j]));
    doc["decoders"] = std::move(decs);
    return doc.dump(2) + "\n";
}

std::string to_json(const StorageCode& code) {
    const int total = code.total_bits();
    json doc;
    doc["schema"] = "1";
    doc["kind"] = "storage";
    doc["t"] = code.t.t;
    doc["r"] = code.r;
    doc["block_masks"] = masks_to_json(code.block_masks, total);
    doc["side_masks"] = masks_to_json(code.side_masks, total);
    json book = json::array();
    for (std::uint32_t v : code.codebook) book.push_back(tuple_hex(v, total));
    doc["codebook"] = std::move(book);
    json rec = json::array();
    for (std::size_t j = 0; j < code.recovery.size(); ++j)
        rec.push_back(table_to_json(code.recovery[j], std::popcount(code.side_masks[j]),
                                    code.t.t[j]));
    doc["recovery"] = std::move(rec);
    return doc.dump(2) + "\n";
}

IndexCode index_code_from_json(const std::string& text) {
    const json doc = parse_document(text, "index");
    IndexCode code;
    code.t = t_from_json(doc.at("t"));
    code.r = doc.at("r").get<int>();
    if (code.r < 0 || code.r > kDefaultTotalBitCap)
        throw ParseError("broadcast width out of range");
    code.block_masks = masks_from_json(doc.at("block_masks"));
    code.side_masks = masks_from_json(doc.at("side_masks"));
    check_masks(code.t, code.block_masks, code.side_masks, nullptr);
    const std::uint32_t space = std::uint32_t(1) << code.total_bits();
    for (const auto& v : doc.at("encoder")) code.encoder.push_back(parse_hex(v.get<std::string>()));
    if (code.encoder.size() != space) throw ParseError("encoder table has the wrong size");
    const json& decs = doc.at("decoders");
    for (std::size_t j = 0; j < code.block_masks.size(); ++j)
        code.decoders.push_back(table_from_json(
            decs.at(j), code.r + std::popcount(code.side_masks[j]), code.t.t[j]));
    return code;
}

StorageCode storage_code_from_json(const std::string& text) {
    const json doc = parse_document(text, "storage");
    StorageCode code;
    code.t = t_from_json(doc.at("t"));
    code.r = doc.at("r").get<int>();
    if (code.r < 0 || code.r > kDefaultTotalBitCap)
        throw ParseError("codebook width out of range");
    code.block_masks = masks_from_json(doc.at("block_masks"));
    code.side_masks = masks_from_json(doc.at("side_masks"));
    check_masks(code.t, code.block_masks, code.side_masks, nullptr);
    for (const auto& v : doc.at("codebook")) code.codebook.push_back(parse_hex(v.get<std::string>()));
    const json& rec = doc.at("recovery");
    for (std::size_t j = 0; j < code.block_masks.size(); ++j)
        code.recovery.push_back(
            table_from_json(rec.at(j), std::popcount(code.side_masks[j]), code.t.t[j]));
    return code;
}

std::string code_kind_from_json(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("malformed code document");
    const std::string kind = doc.value("kind", "");
    if (kind != "index" && kind != "storage") throw ParseError("unknown code kind");
    return kind;
}

}  // namespace confdual
