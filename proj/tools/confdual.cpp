// confdual: one subcommand per computation, reports as text or JSON.
//
// Exit codes: 0 ok, 1 a checked identity failed (regression detector),
// 2 usage, parse, cap, or timeout errors.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "confdual/coding.hpp"
#include "confdual/confusion.hpp"
#include "confdual/errors.hpp"
#include "confdual/fracchrom.hpp"
#include "confdual/graph.hpp"
#include "confdual/guessing.hpp"
#include "confdual/independence.hpp"
#include "confdual/rates.hpp"
#include "confdual/rational.hpp"

namespace {

using confdual::AffineLog;
using confdual::BlockLengths;
using confdual::RateBound;
using confdual::RateValue;
using confdual::Rational;
using json = nlohmann::ordered_json;

constexpr int kIdentityFailure = 1;
constexpr int kUsageError = 2;

struct Options {
    std::string graph_path;
    std::string t_text;
    std::string t_max_text;
    std::string lambda_text;
    std::string mu_text;
    std::vector<std::int64_t> r_list;
    std::int64_t r_max = 0;
    std::int64_t r_single = 0;
    int max_bits = confdual::kDefaultTotalBitCap;
    double timeout = 0.0;
    std::string format = "text";
    int threads = 1;
    std::uint64_t seed = 1;
    bool dump = false;
    std::string engine = "auto";
    std::string kind;
    std::string out_path;
    std::string code_path;
    std::string strategy_path;
};

// ---------------------------------------------------------------- parsing

BlockLengths parse_block_lengths(const std::string& text) {
    BlockLengths t;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            t.t.push_back(v);
        } catch (const std::exception&) {
            throw confdual::ParseError("bad block length '" + item + "' in '" + text + "'");
        }
    }
    if (t.t.empty()) throw confdual::ParseError("empty block-length tuple");
    return t;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw confdual::ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

confdual::SideInformationGraph load_directed(const Options& opt) {
    const std::string text = read_file(opt.graph_path);
    if (confdual::graph_file_is_undirected(text))
        throw confdual::InvalidInput(opt.graph_path +
                                     " holds an undirected graph; this command needs a "
                                     "directed side-information graph");
    return confdual::parse_side_information_graph(text);
}

std::vector<std::int64_t> resolve_r_range(const Options& opt) {
    if (!opt.r_list.empty() && opt.r_max > 0)
        throw confdual::InvalidInput("--r and --r-max are mutually exclusive");
    if (!opt.r_list.empty()) return opt.r_list;
    if (opt.r_max > 0) {
        std::vector<std::int64_t> range(static_cast<std::size_t>(opt.r_max));
        for (std::int64_t i = 0; i < opt.r_max; ++i) range[i] = i + 1;
        return range;
    }
    throw confdual::InvalidInput("one of --r or --r-max is required");
}

confdual::RatesOptions rates_options(const Options& opt) {
    confdual::RatesOptions ro;
    ro.total_bit_cap = opt.max_bits;
    ro.timeout_seconds = opt.timeout;
    ro.threads = opt.threads;
    return ro;
}

confdual::GuessingOptions guessing_options(const Options& opt) {
    confdual::GuessingOptions go;
    go.total_bit_cap = opt.max_bits;
    go.seed = opt.seed;
    go.threads = opt.threads;
    return go;
}

// -------------------------------------------------------------- rendering

std::string hex_tuple(std::uint32_t v, int total_bits) {
    static const char* digits = "0123456789abcdef";
    const int width = std::max(1, (total_bits + 3) / 4);
    std::string out(static_cast<std::size_t>(width), '0');
    for (int i = width - 1; i >= 0; --i, v >>= 4) out[i] = digits[v & 0xf];
    return out;
}

json rational_json(const Rational& r) {
    return json{{"value", confdual::to_string(r)}, {"approx", confdual::to_double(r)}};
}

json rate_value_json(const RateValue& v) {
    json j;
    j["display"] = v.to_display_string();
    if (v.infinite) {
        j["infinite"] = true;
        return j;
    }
    j["coeff"] = confdual::to_string(v.coeff);
    j["log2_base"] = confdual::to_string(v.base);
    j["approx"] = v.approx();
    return j;
}

json affine_log_json(const AffineLog& v) {
    json j;
    j["display"] = v.to_display_string();
    Rational exact;
    if (v.as_rational(&exact)) {
        j["value"] = confdual::to_string(exact);
    } else {
        j["shift"] = confdual::to_string(v.shift);
        j["coeff"] = confdual::to_string(v.coeff);
        j["log2_base"] = confdual::to_string(v.base);
    }
    j["approx"] = v.approx();
    return j;
}

json tuple_list_json(const std::vector<std::uint32_t>& xs, int total_bits) {
    json arr = json::array();
    for (std::uint32_t x : xs) arr.push_back(hex_tuple(x, total_bits));
    return arr;
}

json rate_bound_json(const RateBound& b) {
    json j;
    j["quantity"] = b.quantity;
    j["direction"] = b.direction == confdual::BoundDirection::kLower ? "lower" : "upper";
    j["value"] = rate_value_json(b.value);
    if (!b.witness_t.t.empty()) {
        j["witness_t"] = b.witness_t.to_display_string();
        if (b.witness_r > 0) j["witness_r"] = b.witness_r;
        j["witness_alpha"] = b.witness_alpha;
        j["witness_set"] = tuple_list_json(b.witness_set, b.witness_t.total_bits());
    }
    j["exhausted"] = b.exhausted_range;
    return j;
}

void render_text(const json& node, const std::string& prefix, std::string* out) {
    for (const auto& [key, value] : node.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            render_text(value, name, out);
        } else if (value.is_array() &&
                   !(value.empty() || value.front().is_object() || value.front().is_array())) {
            std::string line = name + " =";
            for (const auto& item : value)
                line += " " + (item.is_string() ? item.get<std::string>() : item.dump());
            *out += line + "\n";
        } else if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i)
                render_text(value[i], name + "[" + std::to_string(i) + "]", out);
        } else {
            *out += name + " = " +
                    (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
        }
    }
}

void emit(const json& report, const Options& opt) {
    if (opt.format == "json") {
        std::fputs((report.dump(2) + "\n").c_str(), stdout);
        return;
    }
    std::string out;
    render_text(report, "", &out);
    std::fputs(out.c_str(), stdout);
}

json report_shell(const std::string& command, const Options& opt) {
    json report;
    report["schema"] = "1";
    report["command"] = command;
    json config;
    if (!opt.graph_path.empty()) config["graph"] = opt.graph_path;
    if (!opt.t_text.empty()) config["t"] = opt.t_text;
    if (!opt.t_max_text.empty()) config["t_max"] = opt.t_max_text;
    if (!opt.lambda_text.empty()) config["lambda"] = opt.lambda_text;
    if (!opt.mu_text.empty()) config["mu"] = opt.mu_text;
    if (!opt.r_list.empty()) {
        config["r"] = opt.r_list;
    } else if (opt.r_max > 0) {
        config["r_max"] = opt.r_max;
    }
    if (opt.r_single > 0) config["r"] = opt.r_single;
    config["max_bits"] = opt.max_bits;
    config["threads"] = opt.threads;
    report["config"] = std::move(config);
    return report;
}

// ------------------------------------------------------------ subcommands

int cmd_confusion(const Options& opt, json& report) {
    const auto g = load_directed(opt);
    const BlockLengths t = parse_block_lengths(opt.t_text);
    const auto cg = confdual::build_confusion_graph(g, t, opt.max_bits);

    report = report_shell("confusion", opt);
    report["total_bits"] = cg.total_bits();
    report["vertices"] = cg.vertex_count();
    report["degree"] = cg.degree();
    report["edges"] = cg.edge_count();
    report["confusable_diffs"] = cg.confusable_diffs().size();
    if (opt.dump || cg.confusable_diffs().size() <= 64)
        report["diffs"] = tuple_list_json(cg.confusable_diffs(), cg.total_bits());
    return 0;
}

int cmd_alpha(const Options& opt, json& report) {
    const std::string text = read_file(opt.graph_path);
    confdual::IndependenceOptions io;
    io.timeout_seconds = opt.timeout;
    if (opt.engine == "orbit") io.engine = confdual::ConfusionEngine::kOrbit;
    if (opt.engine == "suffix") io.engine = confdual::ConfusionEngine::kSuffix;

    report = report_shell("alpha", opt);
    if (confdual::graph_file_is_undirected(text)) {
        const auto g = confdual::parse_undirected_graph(text);
        const auto cert = confdual::max_independent_set(g, io);
        report["graph_kind"] = "undirected";
        report["vertices"] = g.vertex_count();
        report["alpha"] = cert.alpha;
        report["witness"] = cert.witness;
        report["nodes_explored"] = cert.nodes_explored;
    } else {
        const auto g = confdual::parse_side_information_graph(text);
        const BlockLengths t = parse_block_lengths(opt.t_text);
        const auto cg = confdual::build_confusion_graph(g, t, opt.max_bits);
        const auto cert = confdual::max_independent_set(cg, io);
        report["graph_kind"] = "confusion";
        report["total_bits"] = cg.total_bits();
        report["vertices"] = cg.vertex_count();
        report["alpha"] = cert.alpha;
        report["witness"] = tuple_list_json(cert.witness, cg.total_bits());
        report["nodes_explored"] = cert.nodes_explored;
    }
    return 0;
}

int cmd_chromatic(const Options& opt, json& report) {
    const std::string text = read_file(opt.graph_path);
    confdual::FracChromOptions fo;
    fo.timeout_seconds = opt.timeout;

    report = report_shell("chromatic", opt);
    if (confdual::graph_file_is_undirected(text)) {
        const auto g = confdual::parse_undirected_graph(text);
        const auto res = confdual::fractional_chromatic_lp(g, fo);
        report["graph_kind"] = "undirected";
        report["method"] = "lp";
        report["chi_f"] = rational_json(res.chi_f);
        report["columns"] = res.coloring.columns.size();
        report["pricing_rounds"] = res.pricing_rounds;
        return 0;
    }

    const auto g = confdual::parse_side_information_graph(text);
    const BlockLengths t = parse_block_lengths(opt.t_text);
    const auto cg = confdual::build_confusion_graph(g, t, opt.max_bits);
    report["graph_kind"] = "confusion";
    report["total_bits"] = cg.total_bits();
    report["vertices"] = cg.vertex_count();
    if (opt.engine == "lp") {
        const auto res = confdual::fractional_chromatic_lp(confdual::to_explicit(cg), fo);
        report["method"] = "lp";
        report["chi_f"] = rational_json(res.chi_f);
        report["columns"] = res.coloring.columns.size();
        report["pricing_rounds"] = res.pricing_rounds;
    } else {
        const Rational chi = confdual::fractional_chromatic_transitive(cg, fo);
        report["method"] = "transitive";
        report["chi_f"] = rational_json(chi);
    }
    return 0;
}

int cmd_capacity(const Options& opt, json& report) {
    const auto g = load_directed(opt);
    const auto lambda = confdual::parse_weight_vector(opt.lambda_text);
    const auto bound =
        confdual::capacity_lower_bound(g, lambda, resolve_r_range(opt), rates_options(opt));
    report = report_shell("capacity", opt);
    report["bound"] = rate_bound_json(bound);
    return 0;
}

int cmd_storage_rate(const Options& opt, json& report) {
    const auto g = load_directed(opt);
    const auto lambda = confdual::parse_weight_vector(opt.lambda_text);
    const auto bound =
        confdual::storage_rate_upper_bound(g, lambda, resolve_r_range(opt), rates_options(opt));
    report = report_shell("storage-rate", opt);
    report["bound"] = rate_bound_json(bound);
    return 0;
}

int cmd_duality(const Options& opt, json& report) {
    const auto g = load_directed(opt);
    const auto lambda = confdual::parse_weight_vector(opt.lambda_text);
    const auto ro = rates_options(opt);
    const std::vector<std::int64_t> range{opt.r_single};

    const bool lp_identity = confdual::duality_identity_check(g, lambda, opt.r_single, ro);
    const auto cap = confdual::capacity_lower_bound(g, lambda, range, ro);
    const auto sto = confdual::storage_rate_upper_bound(g, lambda, range, ro);
    const auto pairing = confdual::theorem1_complementarity(cap, sto, lambda);

    // 1/C and sum(r lambda)/r - 1/R in display form.
    const AffineLog one_over_c = cap.value.reciprocal();
    AffineLog rhs;
    if (sto.value.is_finite()) {
        const AffineLog one_over_r = sto.value.reciprocal();
        rhs = AffineLog{lambda.sum() - one_over_r.shift, -one_over_r.coeff, one_over_r.base};
    } else {
        rhs = AffineLog::from_rational(lambda.sum());
    }

    report = report_shell("duality", opt);
    report["lp_cover_identity"] = lp_identity;
    report["one_over_capacity"] = affine_log_json(one_over_c);
    report["lambda_sum_minus_one_over_storage"] = affine_log_json(rhs);
    report["capacity_bound"] = rate_bound_json(cap);
    report["storage_bound"] = rate_bound_json(sto);
    json pair;
    pair["same_witness"] = pairing.same_witness;
    pair["exact"] = pairing.exact;
    if (!pairing.exact) {
        pair["residual_sign"] = pairing.residual_sign;
        pair["residual_lo"] = confdual::to_string(pairing.residual_lo);
        pair["residual_hi"] = confdual::to_string(pairing.residual_hi);
    }
    if (!pairing.detail.empty()) pair["detail"] = pairing.detail;
    report["complementarity"] = std::move(pair);

    const bool ok = lp_identity && pairing.exact;
    report["identity"] = ok;
    return ok ? 0 : kIdentityFailure;
}

int cmd_sum(const Options& opt, json& report) {
    const auto g = load_directed(opt);
    const BlockLengths t_max = parse_block_lengths(opt.t_max_text);
    const auto tuples = confdual::enumerate_tuples(t_max);
    const auto ro = rates_options(opt);

    const auto sum = confdual::sum_capacity_bounds(g, tuples, ro);
    const auto k_bound = confdual::optimal_guessing_bound(g, tuples, guessing_options(opt));

    report = report_shell("sum", opt);
    report["tuples_enumerated"] = tuples.size();
    report["c_sum"] = rate_bound_json(sum.c_sum_lower);
    report["r_sum"] = rate_bound_json(sum.r_sum_upper);
    json thm2;
    thm2["per_point_identity"] = sum.per_point_identity;
    thm2["same_witness"] = sum.same_witness;
    thm2["residual_sign"] = sum.residual_sign;
    if (!sum.same_witness) {
        thm2["residual_lo"] = confdual::to_string(sum.residual_lo);
        thm2["residual_hi"] = confdual::to_string(sum.residual_hi);
    }
    report["theorem2"] = std::move(thm2);

    json kb;
    kb["value"] = affine_log_json(k_bound.value);
    kb["witness_t"] = k_bound.witness_t.to_display_string();
    kb["witness_alpha"] = k_bound.witness_alpha;
    report["k_lower"] = std::move(kb);

    // Corollary route: k' <= n / C_sum-bound.
    bool theorem3_ok = true;
    const int n = g.node_count();
    if (sum.c_sum_lower.value.is_finite()) {
        AffineLog k_prime = sum.c_sum_lower.value.reciprocal();
        k_prime.coeff *= n;
        report["k_prime_upper"] = affine_log_json(k_prime);
    } else {
        report["k_prime_upper"] = affine_log_json(AffineLog::from_rational(0));
    }
    if (!sum.r_sum_upper.witness_t.t.empty()) {
        const auto t3 = confdual::theorem3_check(g, sum.r_sum_upper.witness_t,
                                                 guessing_options(opt));
        json tj;
        tj["applicable"] = t3.applicable;
        if (t3.applicable) {
            tj["k_identity"] = t3.k_identity;
            tj["corollary"] = t3.corollary;
            theorem3_ok = t3.k_identity && t3.corollary;
        }
        report["theorem3"] = std::move(tj);
    }

    if (!opt.mu_text.empty()) {
        const auto mu = confdual::parse_weight_vector(opt.mu_text);
        const auto weighted = confdual::weighted_sum_bounds(g, mu, tuples, ro);
        json wj;
        wj["c_weighted"] = rate_bound_json(weighted.c_lower);
        wj["r_weighted"] = rate_bound_json(weighted.r_upper);
        report["weighted"] = std::move(wj);
    }

    const bool ok = sum.per_point_identity && theorem3_ok;
    report["identity"] = ok;
    return ok ? 0 : kIdentityFailure;
}

int cmd_guess(const Options& opt, json& report) {
    const auto g = load_directed(opt);
    const auto go = guessing_options(opt);
    report = report_shell("guess", opt);

    if (!opt.strategy_path.empty()) {
        const auto strategy = confdual::strategy_from_json(read_file(opt.strategy_path));
        report["mode"] = "evaluate";
        report["t"] = strategy.t.to_display_string();
        report["winning_set_size"] = strategy.winning_set.size();
        report["p_win"] = rational_json(strategy.p_win);
        report["p_rand"] = rational_json(strategy.p_rand);
        const auto nums = confdual::guessing_numbers(strategy);
        report["finite"] = nums.finite;
        if (nums.finite) {
            report["k"] = affine_log_json(nums.k);
            report["k_prime"] = affine_log_json(nums.k_complement);
        }
        return 0;
    }

    if (!opt.t_max_text.empty()) {
        const auto tuples = confdual::enumerate_tuples(parse_block_lengths(opt.t_max_text));
        const auto bound = confdual::optimal_guessing_bound(g, tuples, go);
        report["mode"] = "bound";
        report["k_lower"] = affine_log_json(bound.value);
        report["witness_t"] = bound.witness_t.to_display_string();
        report["witness_alpha"] = bound.witness_alpha;
        report["witness_set"] =
            tuple_list_json(bound.witness_set, bound.witness_t.total_bits());
        report["exhausted"] = bound.exhausted_range;
        return 0;
    }

    const BlockLengths t = parse_block_lengths(opt.t_text);
    const auto cg = confdual::build_confusion_graph(g, t, opt.max_bits);
    const auto cert = confdual::max_independent_set(cg);
    const auto strategy = confdual::strategy_from_independent_set(g, t, cert.witness, go);
    const auto nums = confdual::guessing_numbers(strategy);
    report["mode"] = "strategy";
    report["alpha"] = cert.alpha;
    report["winning_set_size"] = strategy.winning_set.size();
    report["p_win"] = rational_json(strategy.p_win);
    report["p_rand"] = rational_json(strategy.p_rand);
    report["k"] = affine_log_json(nums.k);
    report["k_prime"] = affine_log_json(nums.k_complement);

    const auto t3 = confdual::theorem3_check(g, t, go);
    json tj;
    tj["applicable"] = t3.applicable;
    bool ok = true;
    if (t3.applicable) {
        tj["k_identity"] = t3.k_identity;
        tj["corollary"] = t3.corollary;
        ok = t3.k_identity && t3.corollary;
    }
    report["theorem3"] = std::move(tj);
    report["identity"] = ok;
    return ok ? 0 : kIdentityFailure;
}

int cmd_codegen(const Options& opt, json& report) {
    const auto g = load_directed(opt);
    const BlockLengths t = parse_block_lengths(opt.t_text);
    report = report_shell("codegen", opt);
    report["kind"] = opt.kind;
    std::string document;

    if (opt.kind == "index") {
        const auto cg = confdual::build_confusion_graph(g, t, opt.max_bits);
        confdual::FracChromOptions fo;
        fo.timeout_seconds = opt.timeout;
        std::vector<int> coloring;
        const int chi = confdual::chromatic_number(confdual::to_explicit(cg), fo, &coloring);
        const auto code = confdual::index_code_from_coloring(g, t, coloring, opt.max_bits);
        const auto verdict = confdual::verify_code(code);
        report["colors"] = chi;
        report["r"] = code.r;
        report["verified"] = verdict.pass;
        report["checked"] = verdict.checked;
        document = confdual::to_json(code);
    } else if (opt.kind == "storage") {
        const auto cg = confdual::build_confusion_graph(g, t, opt.max_bits);
        const auto cert = confdual::max_independent_set(cg);
        const auto code = confdual::storage_code_from_independent_set(g, t, cert.witness,
                                                                      opt.max_bits);
        const auto verdict = confdual::verify_code(code);
        report["alpha"] = cert.alpha;
        report["r"] = code.r;
        report["codebook_size"] = code.codebook.size();
        report["verified"] = verdict.pass;
        report["checked"] = verdict.checked;
        document = confdual::to_json(code);
    } else {
        throw confdual::InvalidInput("--kind must be index or storage");
    }

    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) throw confdual::InvalidInput("cannot write " + opt.out_path);
        out << document;
        report["out"] = opt.out_path;
    } else {
        report["code"] = json::parse(document);
    }
    return 0;
}

int cmd_verify(const Options& opt, json& report) {
    const std::string text = read_file(opt.code_path);
    const std::string kind = confdual::code_kind_from_json(text);
    report = report_shell("verify", opt);
    report["file"] = opt.code_path;
    report["kind"] = kind;

    bool pass = true;
    if (kind == "index") {
        const auto code = confdual::index_code_from_json(text);
        const auto verdict = confdual::verify_code(code);
        pass = verdict.pass;
        report["r"] = code.r;
        report["checked"] = verdict.checked;
        report["pass"] = verdict.pass;
        if (!verdict.pass) report["counterexample"] = verdict.counterexample;
    } else if (kind == "storage") {
        const auto code = confdual::storage_code_from_json(text);
        const auto verdict = confdual::verify_code(code);
        pass = verdict.pass;
        report["r"] = code.r;
        report["codebook_size"] = code.codebook.size();
        report["checked"] = verdict.checked;
        report["pass"] = verdict.pass;
        if (!verdict.pass) report["counterexample"] = verdict.counterexample;
    } else if (kind == "strategy") {
        const auto strategy = confdual::strategy_from_json(text);
        report["t"] = strategy.t.to_display_string();
        report["winning_set_size"] = strategy.winning_set.size();
        report["p_win"] = rational_json(strategy.p_win);
        report["pass"] = true;
    } else {
        throw confdual::ParseError("unknown document kind '" + kind + "'");
    }
    return pass ? 0 : kIdentityFailure;
}

int cmd_region(const Options& opt, json& report) {
    const auto g = load_directed(opt);
    const BlockLengths t_max = parse_block_lengths(opt.t_max_text);
    const auto points = confdual::region_sample(g, t_max, rates_options(opt));

    report = report_shell("region", opt);
    report["points_sampled"] = points.size();
    json arr = json::array();
    for (const auto& p : points) {
        json pj;
        pj["t"] = p.t.to_display_string();
        pj["alpha"] = p.alpha;
        pj["chi_f"] = confdual::to_string(p.chi_f);
        if (p.capacity_defined) {
            json coords = json::array();
            for (const auto& c : p.capacity) coords.push_back(c.to_display_string());
            pj["capacity"] = std::move(coords);
        }
        if (p.storage_defined) {
            json coords = json::array();
            for (const auto& c : p.storage) coords.push_back(c.to_display_string());
            pj["storage"] = std::move(coords);
        }
        arr.push_back(std::move(pj));
    }
    report["points"] = std::move(arr);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    if (const char* env = std::getenv("CONFDUAL_MAX_BITS")) {
        try {
            opt.max_bits = std::stoi(env);
        } catch (const std::exception&) {
            std::fprintf(stderr, "error: CONFDUAL_MAX_BITS is not an integer\n");
            return kUsageError;
        }
    }

    CLI::App app{"Exact confusion-graph dualities: independence, fractional coloring, "
                 "capacity and storage bounds, guessing numbers, verified codes"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Print help for every subcommand");

    auto add_common = [&](CLI::App* cmd, bool needs_graph = true) {
        if (needs_graph)
            cmd->add_option("--graph", opt.graph_path, "Graph file")->required();
        cmd->add_option("--max-bits", opt.max_bits,
                        "Cap on total tuple bits (env CONFDUAL_MAX_BITS)");
        cmd->add_option("--timeout", opt.timeout, "Solver time budget in seconds");
        cmd->add_option("--format", opt.format, "Output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--threads", opt.threads, "Worker threads (1 = reproducible order)")
            ->check(CLI::PositiveNumber);
        return cmd;
    };

    auto* confusion = add_common(app.add_subcommand("confusion", "Confusion-graph statistics"));
    confusion->add_option("--t", opt.t_text, "Block lengths, comma separated")->required();
    confusion->add_flag("--dump", opt.dump, "List all confusable differences");

    auto* alpha = add_common(app.add_subcommand("alpha", "Exact independence number"));
    alpha->add_option("--t", opt.t_text, "Block lengths (directed inputs)");
    alpha->add_option("--engine", opt.engine, "Search engine: auto, orbit, suffix")
        ->check(CLI::IsMember({"auto", "orbit", "suffix"}));

    auto* chromatic =
        add_common(app.add_subcommand("chromatic", "Exact fractional chromatic number"));
    chromatic->add_option("--t", opt.t_text, "Block lengths (directed inputs)");
    chromatic->add_option("--engine", opt.engine, "transitive (default) or lp")
        ->check(CLI::IsMember({"auto", "transitive", "lp"}));

    auto* capacity =
        add_common(app.add_subcommand("capacity", "Certified capacity lower bound"));
    capacity->add_option("--lambda", opt.lambda_text, "Direction vector")->required();
    capacity->add_option("--r", opt.r_list, "Candidate r values")->delimiter(',');
    capacity->add_option("--r-max", opt.r_max, "Scan r = 1..r-max");

    auto* storage =
        add_common(app.add_subcommand("storage-rate", "Certified storage-rate upper bound"));
    storage->add_option("--lambda", opt.lambda_text, "Direction vector")->required();
    storage->add_option("--r", opt.r_list, "Candidate r values")->delimiter(',');
    storage->add_option("--r-max", opt.r_max, "Scan r = 1..r-max");

    auto* duality = add_common(
        app.add_subcommand("duality", "Capacity-storage complementarity at one r"));
    duality->add_option("--lambda", opt.lambda_text, "Direction vector")->required();
    duality->add_option("--r", opt.r_single, "Scaling factor r")
        ->required()
        ->check(CLI::PositiveNumber);

    auto* sum = add_common(app.add_subcommand("sum", "Sum-rate bounds and the k/k' bridge"));
    sum->add_option("--t-max", opt.t_max_text, "Componentwise tuple bound")->required();
    sum->add_option("--mu", opt.mu_text, "Also bound the mu-weighted sum rates");

    auto* guess = add_common(app.add_subcommand("guess", "Guessing strategies and numbers"));
    guess->add_option("--t", opt.t_text, "Strategy from a maximum independent set at t");
    guess->add_option("--t-max", opt.t_max_text, "Bound k(G) over all tuples up to t-max");
    guess->add_option("--strategy", opt.strategy_path, "Evaluate a strategy JSON file");
    guess->add_option("--seed", opt.seed, "Sampling seed");

    auto* codegen = add_common(app.add_subcommand("codegen", "Synthesize a verified code"));
    codegen->add_option("--t", opt.t_text, "Block lengths")->required();
    codegen->add_option("--kind", opt.kind, "index or storage")->required();
    codegen->add_option("--out", opt.out_path, "Write the code JSON here");

    auto* verify = add_common(
        app.add_subcommand("verify", "Re-verify a code or strategy document"), false);
    verify->add_option("--code", opt.code_path, "Code or strategy JSON file")->required();

    auto* region = add_common(app.add_subcommand("region", "Achievable corner points"));
    region->add_option("--t-max", opt.t_max_text, "Componentwise tuple bound")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        json report;
        int rc = 0;
        if (confusion->parsed()) rc = cmd_confusion(opt, report);
        else if (alpha->parsed()) rc = cmd_alpha(opt, report);
        else if (chromatic->parsed()) rc = cmd_chromatic(opt, report);
        else if (capacity->parsed()) rc = cmd_capacity(opt, report);
        else if (storage->parsed()) rc = cmd_storage_rate(opt, report);
        else if (duality->parsed()) rc = cmd_duality(opt, report);
        else if (sum->parsed()) rc = cmd_sum(opt, report);
        else if (guess->parsed()) rc = cmd_guess(opt, report);
        else if (codegen->parsed()) rc = cmd_codegen(opt, report);
        else if (verify->parsed()) rc = cmd_verify(opt, report);
        else if (region->parsed()) rc = cmd_region(opt, report);
        report["elapsed_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        emit(report, opt);
        return rc;
    } catch (const confdual::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsageError;
    }
}
