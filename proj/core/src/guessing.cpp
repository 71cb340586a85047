#include "confdual/guessing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "confdual/errors.hpp"
#include "confdual/independence.hpp"

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

bool all_players_right(std::uint32_t x, const GuessingStrategy& s) {
    for (std::size_t j = 0; j < s.guess_tables.size(); ++j) {
        const std::uint32_t obs = extract_bits(x, s.side_masks[j]);
        if (s.guess_tables[j][obs] != extract_bits(x, s.block_masks[j])) return false;
    }
    return true;
}

// Exhaustive winning-set scan; chunks concatenate in range order, so the
// result is schedule independent.
void fill_winning_set(GuessingStrategy& s, int threads) {
    const std::int64_t space = std::int64_t(1) << s.total_bits();
    const int slices = static_cast<int>(std::min<std::int64_t>(space / 4096 + 1, 64));
    threads = std::clamp(threads, 1, slices);
    std::vector<std::vector<std::uint32_t>> parts(threads);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
        const std::int64_t lo = space * w / threads, hi = space * (w + 1) / threads;
        auto scan = [&s, &out = parts[w], lo, hi] {
            for (std::int64_t x = lo; x < hi; ++x)
                if (all_players_right(static_cast<std::uint32_t>(x), s))
                    out.push_back(static_cast<std::uint32_t>(x));
        };
        if (threads == 1) scan();
        else pool.emplace_back(std::move(scan));
    }
    for (auto& th : pool) th.join();
    s.winning_set.clear();
    for (auto& part : parts)
        s.winning_set.insert(s.winning_set.end(), part.begin(), part.end());
    s.p_rand = Rational(1, BigInt(1) << s.total_bits());
    s.p_win = Rational(s.winning_set.size()) * s.p_rand;
}

GuessingStrategy make_shell(const SideInformationGraph& g, const BlockLengths& t) {
    TupleLayout lay = tuple_layout(g, t);
    GuessingStrategy s;
    s.t = t;
    s.block_masks = std::move(lay.block_masks);
    s.side_masks = std::move(lay.side_masks);
    return s;
}

void check_tables(const GuessingStrategy& s) {
    for (std::size_t j = 0; j < s.guess_tables.size(); ++j) {
        if (s.guess_tables[j].size() !=
            std::size_t(1) << std::popcount(s.side_masks[j]))
            throw InvalidInput("guess table of player " + std::to_string(j + 1) +
                               " has the wrong size");
        for (std::uint32_t v : s.guess_tables[j])
            if (s.t.t[j] < 32 && (v >> s.t.t[j]) != 0)
                throw InvalidInput("guess of player " + std::to_string(j + 1) +
                                   " exceeds its block width");
    }
}

}  // namespace

GuessingStrategy strategy_from_independent_set(const SideInformationGraph& g,
                                               const BlockLengths& t,
                                               const std::vector<std::uint32_t>& s,
                                               const GuessingOptions& opts) {
    if (s.empty()) throw InvalidInput("independent set is empty");
    const ConfusionGraph cg = build_confusion_graph(g, t, opts.total_bit_cap);
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t k = i + 1; k < s.size(); ++k)
            if (s[i] == s[k] || cg.confusable_diff(s[i] ^ s[k])) {
                for (int j = 0; j < g.node_count(); ++j)
                    if (((s[i] ^ s[k]) & cg.block_mask(j)) != 0 &&
                        ((s[i] ^ s[k]) & cg.side_mask(j)) == 0)
                        throw InvalidInput(
                            "not an independent set: tuples 0x" +
                            hex_word(s[i], hex_width(cg.total_bits())) + " and 0x" +
                            hex_word(s[k], hex_width(cg.total_bits())) +
                            " are confusable at node " + std::to_string(j + 1));
                throw InvalidInput("duplicate tuple in the independent set");
            }

    GuessingStrategy strategy = make_shell(g, t);
    for (int j = 0; j < g.node_count(); ++j)
        strategy.guess_tables.emplace_back(
            std::size_t(1) << std::popcount(strategy.side_masks[j]), 0);
    for (std::uint32_t c : s)
        for (std::size_t j = 0; j < strategy.guess_tables.size(); ++j)
            strategy.guess_tables[j][extract_bits(c, strategy.side_masks[j])] =
                extract_bits(c, strategy.block_masks[j]);
    fill_winning_set(strategy, opts.threads);

    for (std::uint32_t c : s)
        if (!std::binary_search(strategy.winning_set.begin(), strategy.winning_set.end(), c))
            throw Error("winning set lost a member of the defining independent set");
    return strategy;
}

GuessingEvaluation evaluate_strategy(const SideInformationGraph& g, const BlockLengths& t,
                                     const std::vector<std::vector<std::uint32_t>>& guess_tables,
                                     const GuessingOptions& opts) {
    const int total = t.total_bits();
    GuessingEvaluation eval;
    eval.strategy = make_shell(g, t);
    eval.strategy.guess_tables = guess_tables;
    check_tables(eval.strategy);
    if (total <= opts.total_bit_cap) {
        fill_winning_set(eval.strategy, opts.threads);
        return eval;
    }
    if (!opts.allow_sampling)
        throw LimitError("tuple space needs " + std::to_string(total) +
                         " bits, cap is " + std::to_string(opts.total_bit_cap) +
                         "; enable sampling for an estimate");

    eval.exhaustive = false;
    eval.samples = std::max<std::int64_t>(opts.samples, 1);
    const std::uint32_t space_mask =
        total == 32 ? ~std::uint32_t(0) : (std::uint32_t(1) << total) - 1;
    std::mt19937_64 rng(opts.seed);
    std::int64_t wins = 0;
    for (std::int64_t i = 0; i < eval.samples; ++i)
        wins += all_players_right(static_cast<std::uint32_t>(rng()) & space_mask,
                                  eval.strategy);
    eval.p_win_estimate = Rational(wins, eval.samples);
    const double p = static_cast<double>(wins) / static_cast<double>(eval.samples);
    eval.radius95 = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(eval.samples));
    eval.strategy.p_rand = Rational(1, BigInt(1) << total);
    return eval;
}

GuessingResult guessing_numbers(const GuessingStrategy& strategy) {
    const int n = strategy.t.size();
    const int total = strategy.total_bits();
    if (total <= 0) throw InvalidInput("guessing numbers need at least one bit in play");
    GuessingResult result;
    const std::size_t w = strategy.winning_set.size();
    if (w == 0) {
        result.finite = false;
        return result;
    }
    result.k = AffineLog{0, Rational(n, total), Rational(w)};
    result.k_complement = AffineLog{n, Rational(-n, total), Rational(w)};
    return result;
}

GuessingBound optimal_guessing_bound(const SideInformationGraph& g,
                                     const std::vector<BlockLengths>& t_enum,
                                     const GuessingOptions& opts) {
    if (t_enum.empty()) throw InvalidInput("empty tuple enumeration");
    const int n = g.node_count();
    GuessingBound bound;
    bool have = false;
    for (const auto& t : t_enum) {
        const ConfusionGraph cg = build_confusion_graph(g, t, opts.total_bit_cap);
        const auto cert = max_independent_set(cg);
        const AffineLog value{0, Rational(n, cg.total_bits()), Rational(cert.alpha)};
        const int cmp = have ? compare(value, bound.value) : 1;
        const bool lex = cmp == 0 && std::lexicographical_compare(
                                         t.t.begin(), t.t.end(),
                                         bound.witness_t.t.begin(), bound.witness_t.t.end());
        if (cmp > 0 || lex) {
            bound.value = value;
            bound.witness_t = t;
            bound.witness_alpha = cert.alpha;
            bound.witness_set = cert.witness;
            have = true;
        }
    }
    bound.exhausted_range = std::to_string(t_enum.size()) + " tuples enumerated";
    return bound;
}

Theorem3Report theorem3_check(const SideInformationGraph& g, const BlockLengths& t,
                              const GuessingOptions& opts) {
    const ConfusionGraph cg = build_confusion_graph(g, t, opts.total_bit_cap);
    const auto cert = max_independent_set(cg);
    Theorem3Report report;
    if (cert.alpha <= 1) return report;
    report.applicable = true;

    // k from an actually evaluated strategy over a maximum independent set.
    const GuessingStrategy strategy = strategy_from_independent_set(g, t, cert.witness, opts);
    const GuessingResult numbers = guessing_numbers(strategy);

    const int n = g.node_count();
    const int total = cg.total_bits();
    const RateValue r_sum_value{Rational(total), Rational(cert.alpha)};
    const Rational chi_f(BigInt(1) << total, BigInt(cert.alpha));
    const RateValue c_sum_value{Rational(total), chi_f};

    // n / R_sum at this tuple, built through the rate-value reciprocal.
    AffineLog k_via_rate = r_sum_value.reciprocal();
    k_via_rate.coeff *= n;
    report.k_identity = numbers.finite && exact_equal(numbers.k, k_via_rate);

    AffineLog kprime_via_rate = c_sum_value.reciprocal();
    kprime_via_rate.coeff *= n;
    report.corollary = numbers.finite && exact_equal(numbers.k_complement, kprime_via_rate);
    return report;
}

std::string to_json(const GuessingStrategy& strategy) {
    const int total = strategy.total_bits();
    json doc;
    doc["schema"] = "1";
    doc["kind"] = "strategy";
    doc["t"] = strategy.t.t;
    json blocks = json::array(), sides = json::array();
    for (std::uint32_t m : strategy.block_masks) blocks.push_back(hex_word(m, hex_width(total)));
    for (std::uint32_t m : strategy.side_masks) sides.push_back(hex_word(m, hex_width(total)));
    doc["block_masks"] = std::move(blocks);
    doc["side_masks"] = std::move(sides);
    json players = json::array();
    for (std::size_t j = 0; j < strategy.guess_tables.size(); ++j) {
        const int obs_bits = std::popcount(strategy.side_masks[j]);
        json table = json::object();
        for (std::size_t obs = 0; obs < strategy.guess_tables[j].size(); ++obs)
            table[hex_word(static_cast<std::uint32_t>(obs), hex_width(obs_bits))] =
                hex_word(strategy.guess_tables[j][obs], hex_width(strategy.t.t[j]));
        players.push_back(std::move(table));
    }
    doc["players"] = std::move(players);
    return doc.dump(2) + "\n";
}

GuessingStrategy strategy_from_json(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("malformed strategy document");
    if (doc.value("schema", "") != "1") throw ParseError("unsupported schema");
    if (doc.value("kind", "") != "strategy") throw ParseError("expected a strategy document");

    GuessingStrategy s;
    for (const auto& v : doc.at("t")) s.t.t.push_back(v.get<int>());
    const int total = s.t.total_bits();
    if (total > kDefaultTotalBitCap) throw LimitError("tuple too wide to materialize");
    for (const auto& v : doc.at("block_masks")) s.block_masks.push_back(parse_hex(v.get<std::string>()));
    for (const auto& v : doc.at("side_masks")) s.side_masks.push_back(parse_hex(v.get<std::string>()));
    const json& players = doc.at("players");
    if (s.block_masks.size() != s.t.t.size() || s.side_masks.size() != s.t.t.size() ||
        players.size() != s.t.t.size())
        throw ParseError("per-player arrays do not match the tuple length");

    std::uint32_t seen = 0;
    for (std::size_t j = 0; j < s.block_masks.size(); ++j) {
        if (std::popcount(s.block_masks[j]) != s.t.t[j] || (s.block_masks[j] & seen) != 0)
            throw ParseError("block masks do not tile the tuple");
        if ((s.side_masks[j] & s.block_masks[j]) != 0)
            throw ParseError("side mask includes the player's own block");
        seen |= s.block_masks[j];
    }
    const std::uint32_t space_mask =
        total == 32 ? ~std::uint32_t(0) : (std::uint32_t(1) << total) - 1;
    if (seen != space_mask) throw ParseError("block masks do not tile the tuple");

    for (std::size_t j = 0; j < players.size(); ++j) {
        const int obs_bits = std::popcount(s.side_masks[j]);
        std::vector<std::uint32_t> table(std::size_t(1) << obs_bits, 0);
        for (const auto& [key, value] : players[j].items()) {
            const std::uint32_t obs = parse_hex(key);
            if (obs >= table.size()) throw ParseError("observation out of range: " + key);
            table[obs] = parse_hex(value.get<std::string>());
        }
        s.guess_tables.push_back(std::move(table));
    }
    check_tables(s);
    fill_winning_set(s, 1);
    return s;
}

}  // namespace confdual
