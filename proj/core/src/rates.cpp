#include "confdual/rates.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "confdual/errors.hpp"
#include "confdual/fracchrom.hpp"
#include "confdual/independence.hpp"

namespace confdual {

namespace {

// Evaluation of one tuple point: alpha with certificate by branch and
// bound, chi_f by vertex transitivity.
struct TupleEval {
    BlockLengths t;
    int total = 0;
    std::int64_t alpha = 0;
    Rational chi_f;
    std::vector<std::uint32_t> witness;
};

class Budget {
public:
    explicit Budget(double seconds)
        : enabled_(seconds > 0),
          end_(std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(seconds))) {}

    // Seconds left, strictly positive; throws once spent.
    double remaining(const char* what) const {
        if (!enabled_) return 0.0;
        const double left = std::chrono::duration<double>(end_ - std::chrono::steady_clock::now()).count();
        if (left <= 0) throw TimeoutError(std::string(what) + ": time budget exhausted");
        return left;
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point end_;
};

TupleEval evaluate_tuple(const SideInformationGraph& g, BlockLengths t, const RatesOptions& opts,
                         const Budget& budget) {
    TupleEval out;
    out.total = t.total_bits();
    const ConfusionGraph cg = build_confusion_graph(g, t, opts.total_bit_cap);
    IndependenceOptions iopts;
    iopts.timeout_seconds = budget.remaining("rates");
    auto cert = max_independent_set(cg, iopts);
    out.alpha = cert.alpha;
    out.witness = std::move(cert.witness);
    out.chi_f = Rational(BigInt(1) << out.total, BigInt(out.alpha));
    out.t = std::move(t);
    return out;
}

// Index-ordered parallel map; the reduction order downstream never depends
// on the schedule, and the lowest-index exception wins deterministically.
template <typename F>
void parallel_for(int n, int threads, F&& body) {
    threads = std::clamp(threads, 1, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void check_direction(const SideInformationGraph& g, const WeightVector& lambda) {
    if (lambda.size() != g.node_count())
        throw InvalidInput("direction has " + std::to_string(lambda.size()) + " entries for " +
                           std::to_string(g.node_count()) + " nodes");
    for (const auto& v : lambda.entries)
        if (v < 0) throw InvalidInput("direction entries must be nonnegative");
    if (lambda.all_zero()) throw InvalidInput("direction must not be all zero");
}

struct DirectionScan {
    std::vector<TupleEval> points;       // one per admitted r, ascending
    std::vector<std::int64_t> admitted;  // the r values, ascending
    std::string range_note;
};

// Evaluates Gamma_{r lambda} for every candidate r that keeps r*lambda
// integral; the others are recorded, not errors.
DirectionScan scan_direction(const SideInformationGraph& g, const WeightVector& lambda,
                             std::vector<std::int64_t> r_range, const RatesOptions& opts) {
    check_direction(g, lambda);
    if (r_range.empty()) throw InvalidInput("empty r range");
    std::sort(r_range.begin(), r_range.end());
    r_range.erase(std::unique(r_range.begin(), r_range.end()), r_range.end());
    if (r_range.front() <= 0) throw InvalidInput("r values must be positive");

    DirectionScan scan;
    std::vector<std::int64_t> skipped;
    std::vector<BlockLengths> tuples;
    for (std::int64_t r : r_range) {
        BlockLengths t;
        bool integral = true;
        long long total = 0;
        for (const auto& lj : lambda.entries) {
            const Rational scaled = lj * r;
            if (rational_den(scaled) != 1) {
                integral = false;
                break;
            }
            const BigInt bits = rational_num(scaled);
            if (bits > opts.total_bit_cap)
                throw LimitError("r=" + std::to_string(r) + " needs " + bits.str() +
                                 " bits at one node, cap is " + std::to_string(opts.total_bit_cap));
            t.t.push_back(bits.convert_to<int>());
            total += t.t.back();
        }
        if (!integral) {
            skipped.push_back(r);
            continue;
        }
        if (total > opts.total_bit_cap)
            throw LimitError("r=" + std::to_string(r) + " needs " + std::to_string(total) +
                             " total bits, cap is " + std::to_string(opts.total_bit_cap));
        scan.admitted.push_back(r);
        tuples.push_back(std::move(t));
    }
    if (scan.admitted.empty())
        throw InvalidInput("no r in the range keeps r*lambda integral (lambda = " +
                           lambda.to_display_string() + ")");

    const Budget budget(opts.timeout_seconds);
    scan.points.resize(tuples.size());
    parallel_for(static_cast<int>(tuples.size()), opts.threads, [&](int i) {
        scan.points[i] = evaluate_tuple(g, tuples[i], opts, budget);
    });

    std::ostringstream os;
    os << "r in {";
    for (std::size_t i = 0; i < scan.admitted.size(); ++i)
        os << (i ? "," : "") << scan.admitted[i];
    os << "}";
    if (!skipped.empty()) {
        os << "; skipped non-integral r in {";
        for (std::size_t i = 0; i < skipped.size(); ++i) os << (i ? "," : "") << skipped[i];
        os << "}";
    }
    scan.range_note = os.str();
    return scan;
}

bool lex_less(const BlockLengths& a, const BlockLengths& b) {
    return std::lexicographical_compare(a.t.begin(), a.t.end(), b.t.begin(), b.t.end());
}

// Adds coeff*log2(base) to a rational interval.
void add_log_term(const Rational& coeff, const Rational& base, Rational& lo, Rational& hi) {
    if (coeff == 0 || base == 1) return;
    const auto [l, h] = log2_enclosure(base);
    if (coeff > 0) {
        lo += coeff * l;
        hi += coeff * h;
    } else {
        lo += coeff * h;
        hi += coeff * l;
    }
}

}  // namespace

bool WeightVector::all_zero() const {
    for (const auto& v : entries)
        if (v != 0) return false;
    return true;
}

Rational WeightVector::sum() const {
    Rational s = 0;
    for (const auto& v : entries) s += v;
    return s;
}

std::string WeightVector::to_display_string() const {
    std::string out;
    for (int i = 0; i < size(); ++i) {
        if (i) out += ",";
        out += to_string(entries[i]);
    }
    return out;
}

WeightVector parse_weight_vector(const std::string& text) {
    WeightVector w;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        w.entries.push_back(parse_rational(text.substr(pos, comma - pos)));
        if (w.entries.back() < 0)
            throw ParseError("negative entry in weight vector '" + text + "'");
        pos = comma + 1;
    }
    return w;
}

RateBound capacity_lower_bound(const SideInformationGraph& g, const WeightVector& lambda,
                               const std::vector<std::int64_t>& r_range,
                               const RatesOptions& opts) {
    const DirectionScan scan = scan_direction(g, lambda, r_range, opts);

    RateBound bound;
    bound.quantity = "C(lambda)";
    bound.direction = BoundDirection::kLower;
    bound.exhausted_range = scan.range_note;

    std::vector<RateValue> values(scan.points.size());
    int best = -1;
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
        const TupleEval& p = scan.points[i];
        values[i] = p.chi_f == 1 ? RateValue::infinity()
                                 : RateValue{Rational(scan.admitted[i]), p.chi_f};
        if (best < 0 || compare(values[i], values[best]) > 0) best = static_cast<int>(i);
    }
    // Scaling never hurts: the point at m*r weakly dominates the one at r.
    for (std::size_t i = 0; i < scan.points.size(); ++i)
        for (std::size_t j = i + 1; j < scan.points.size(); ++j)
            if (scan.admitted[j] % scan.admitted[i] == 0 && compare(values[j], values[i]) < 0)
                throw Error("capacity bound shrank from r=" + std::to_string(scan.admitted[i]) +
                            " to r=" + std::to_string(scan.admitted[j]));

    const TupleEval& w = scan.points[best];
    bound.value = values[best];
    bound.witness_t = w.t;
    bound.witness_r = scan.admitted[best];
    bound.witness_alpha = w.alpha;
    bound.witness_set = w.witness;
    return bound;
}

RateBound storage_rate_upper_bound(const SideInformationGraph& g, const WeightVector& lambda,
                                   const std::vector<std::int64_t>& r_range,
                                   const RatesOptions& opts) {
    const DirectionScan scan = scan_direction(g, lambda, r_range, opts);

    RateBound bound;
    bound.quantity = "R(lambda)";
    bound.direction = BoundDirection::kUpper;
    bound.value = RateValue::infinity();

    std::vector<std::int64_t> no_codebook;
    int best = -1;
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
        const TupleEval& p = scan.points[i];
        if (p.alpha <= 1) {
            no_codebook.push_back(scan.admitted[i]);
            continue;
        }
        const RateValue value{Rational(scan.admitted[i]), Rational(p.alpha)};
        if (best < 0 || compare(value, bound.value) < 0) {
            best = static_cast<int>(i);
            bound.value = value;
        }
    }
    std::ostringstream os;
    os << scan.range_note;
    if (!no_codebook.empty()) {
        os << "; alpha=1 (no codebook) at r in {";
        for (std::size_t i = 0; i < no_codebook.size(); ++i)
            os << (i ? "," : "") << no_codebook[i];
        os << "}";
    }
    bound.exhausted_range = os.str();
    if (best >= 0) {
        const TupleEval& w = scan.points[best];
        bound.witness_t = w.t;
        bound.witness_r = scan.admitted[best];
        bound.witness_alpha = w.alpha;
        bound.witness_set = w.witness;
    }
    return bound;
}

bool duality_identity_check(const SideInformationGraph& g, const WeightVector& lambda,
                            std::int64_t r, const RatesOptions& opts) {
    const DirectionScan scan = scan_direction(g, lambda, {r}, opts);
    const TupleEval& p = scan.points.front();
    // chi_f from the covering LP on the explicit graph, so the two factors
    // of the product come from different solvers.
    FracChromOptions fopts;
    fopts.timeout_seconds = opts.timeout_seconds;
    const ConfusionGraph cg = build_confusion_graph(g, p.t, opts.total_bit_cap);
    const Rational chi_lp = fractional_chromatic_lp(to_explicit(cg), fopts).chi_f;
    return chi_lp * p.alpha == Rational(BigInt(1) << p.total);
}

Theorem1Report theorem1_complementarity(const RateBound& capacity_lower,
                                        const RateBound& storage_upper,
                                        const WeightVector& lambda) {
    if (capacity_lower.direction != BoundDirection::kLower ||
        storage_upper.direction != BoundDirection::kUpper)
        throw InvalidInput("theorem 1 pairing needs a capacity lower and a storage upper bound");

    Theorem1Report report;
    const bool both_finite =
        capacity_lower.value.is_finite() && storage_upper.value.is_finite();
    report.same_witness = both_finite && capacity_lower.witness_r > 0 &&
                          capacity_lower.witness_r == storage_upper.witness_r &&
                          capacity_lower.witness_t == storage_upper.witness_t;

    const Rational lambda_sum = lambda.sum();
    if (report.same_witness) {
        // Same witness r: 1/C + 1/R = (log2 chi_f + log2 alpha)/r, and the
        // numerator collapses to sum(r*lambda) by Lemma 1.
        int total = 0;
        for (int tj : capacity_lower.witness_t.t) total += tj;
        report.exact = capacity_lower.value.base * storage_upper.value.base ==
                           Rational(BigInt(1) << total) &&
                       Rational(total) == lambda_sum * capacity_lower.witness_r;
        report.residual_sign = report.exact ? 0 : 1;
        report.detail = report.exact ? "same witness r, identity exact"
                                     : "same witness r, identity FAILED";
        return report;
    }

    // Mixed witnesses: report the exact sign of 1/C + 1/R - sum(lambda) and
    // a rational enclosure of its value. 1/inf contributes zero.
    std::vector<std::pair<Rational, Rational>> terms;
    Rational lo = -lambda_sum, hi = -lambda_sum;
    if (capacity_lower.value.is_finite()) {
        const Rational c = Rational(1) / capacity_lower.value.coeff;
        terms.emplace_back(c, capacity_lower.value.base);
        add_log_term(c, capacity_lower.value.base, lo, hi);
    }
    if (storage_upper.value.is_finite()) {
        const Rational c = Rational(1) / storage_upper.value.coeff;
        terms.emplace_back(c, storage_upper.value.base);
        add_log_term(c, storage_upper.value.base, lo, hi);
    }
    terms.emplace_back(-lambda_sum, 2);
    report.residual_sign = log_combination_sign(terms);
    report.residual_lo = lo;
    report.residual_hi = hi;
    report.exact = false;
    report.detail = both_finite ? "bounds from different witnesses; residual reported"
                                : "a bound is infinite; residual reported against zero";
    return report;
}

SumRateReport sum_capacity_bounds(const SideInformationGraph& g,
                                  const std::vector<BlockLengths>& t_enum,
                                  const RatesOptions& opts) {
    if (t_enum.empty()) throw InvalidInput("empty tuple enumeration");
    for (const auto& t : t_enum) {
        if (t.size() != g.node_count())
            throw InvalidInput("tuple size does not match the graph");
        if (t.total_bits() <= 0) throw InvalidInput("all-zero tuple in enumeration");
    }

    const Budget budget(opts.timeout_seconds);
    std::vector<TupleEval> points(t_enum.size());
    parallel_for(static_cast<int>(t_enum.size()), opts.threads, [&](int i) {
        points[i] = evaluate_tuple(g, t_enum[i], opts, budget);
    });

    SumRateReport report;
    report.c_sum_lower.quantity = "C_sum";
    report.c_sum_lower.direction = BoundDirection::kLower;
    report.r_sum_upper.quantity = "R_sum";
    report.r_sum_upper.direction = BoundDirection::kUpper;
    report.r_sum_upper.value = RateValue::infinity();
    const std::string note = std::to_string(points.size()) + " tuples enumerated";
    report.c_sum_lower.exhausted_range = note;
    report.r_sum_upper.exhausted_range = note;

    report.per_point_identity = true;
    int best_c = -1, best_r = -1;
    RateValue best_c_value;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const TupleEval& p = points[i];
        // Theorem 2 at this tuple: 1/(sum t/log2 chi_f) = 1 - 1/(sum t/log2 alpha).
        const AffineLog lhs{0, Rational(1, p.total), p.chi_f};
        const AffineLog rhs{1, Rational(-1, p.total), Rational(p.alpha)};
        if (!exact_equal(lhs, rhs)) report.per_point_identity = false;

        const RateValue c_value = p.chi_f == 1 ? RateValue::infinity()
                                               : RateValue{Rational(p.total), p.chi_f};
        const int c_cmp = best_c < 0 ? 1 : compare(c_value, best_c_value);
        if (c_cmp > 0 || (c_cmp == 0 && lex_less(p.t, points[best_c].t))) {
            best_c = static_cast<int>(i);
            best_c_value = c_value;
        }
        if (p.alpha > 1) {
            const RateValue r_value{Rational(p.total), Rational(p.alpha)};
            const int cmp = best_r < 0 ? -1 : compare(r_value, report.r_sum_upper.value);
            if (cmp < 0 || (cmp == 0 && lex_less(p.t, points[best_r].t))) {
                best_r = static_cast<int>(i);
                report.r_sum_upper.value = r_value;
            }
        }
    }

    auto fill = [&](RateBound& bound, int idx) {
        const TupleEval& p = points[idx];
        bound.witness_t = p.t;
        bound.witness_alpha = p.alpha;
        bound.witness_set = p.witness;
    };
    report.c_sum_lower.value = best_c_value;
    fill(report.c_sum_lower, best_c);
    if (best_r >= 0) fill(report.r_sum_upper, best_r);

    report.same_witness = best_r >= 0 && points[best_c].t == points[best_r].t;
    if (report.same_witness) return report;

    // Residual 1/C_sum + 1/R_sum - 1 of the selected pair; infinite bounds
    // contribute zero to the reciprocal sum.
    std::vector<std::pair<Rational, Rational>> terms{{-1, 2}};
    Rational lo = -1, hi = -1;
    for (const RateValue* v : {&best_c_value, &report.r_sum_upper.value}) {
        if (!v->is_finite()) continue;
        const Rational c = Rational(1) / v->coeff;
        terms.emplace_back(c, v->base);
        add_log_term(c, v->base, lo, hi);
    }
    report.residual_sign = log_combination_sign(terms);
    report.residual_lo = lo;
    report.residual_hi = hi;
    return report;
}

WeightedSumReport weighted_sum_bounds(const SideInformationGraph& g, const WeightVector& mu,
                                      const std::vector<BlockLengths>& t_enum,
                                      const RatesOptions& opts) {
    if (mu.size() != g.node_count()) throw InvalidInput("weight vector size mismatch");
    for (const auto& v : mu.entries)
        if (v < 0) throw InvalidInput("weights must be nonnegative");
    if (t_enum.empty()) throw InvalidInput("empty tuple enumeration");

    const Budget budget(opts.timeout_seconds);
    std::vector<TupleEval> points(t_enum.size());
    parallel_for(static_cast<int>(t_enum.size()), opts.threads, [&](int i) {
        points[i] = evaluate_tuple(g, t_enum[i], opts, budget);
    });

    WeightedSumReport report;
    report.c_lower.quantity = "C_bar(mu)";
    report.c_lower.direction = BoundDirection::kLower;
    report.r_upper.quantity = "R_bar(mu)";
    report.r_upper.direction = BoundDirection::kUpper;
    report.r_upper.value = RateValue::infinity();
    const std::string note = std::to_string(points.size()) + " tuples enumerated";
    report.c_lower.exhausted_range = note;
    report.r_upper.exhausted_range = note;

    auto weighted = [&](const BlockLengths& t) {
        Rational s = 0;
        for (int j = 0; j < t.size(); ++j) s += mu.entries[j] * t.t[j];
        return s;
    };
    // A zero weighted sum is the exact value zero regardless of the base.
    auto as_value = [&](const Rational& coeff, const Rational& base) {
        return coeff == 0 ? RateValue{0, 2} : RateValue{coeff, base};
    };

    int best_c = -1, best_r = -1;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const TupleEval& p = points[i];
        const Rational w = weighted(p.t);
        const RateValue c_value = p.chi_f == 1 && w != 0 ? RateValue::infinity()
                                                         : as_value(w, p.chi_f);
        int cmp = best_c < 0 ? 1 : compare(c_value, report.c_lower.value);
        if (cmp > 0 || (cmp == 0 && best_c >= 0 && lex_less(p.t, points[best_c].t))) {
            best_c = static_cast<int>(i);
            report.c_lower.value = c_value;
        }
        if (p.alpha > 1) {
            const RateValue r_value = as_value(w, Rational(p.alpha));
            cmp = best_r < 0 ? -1 : compare(r_value, report.r_upper.value);
            if (cmp < 0 || (cmp == 0 && best_r >= 0 && lex_less(p.t, points[best_r].t))) {
                best_r = static_cast<int>(i);
                report.r_upper.value = r_value;
            }
        }
    }
    auto fill = [&](RateBound& bound, int idx) {
        bound.witness_t = points[idx].t;
        bound.witness_alpha = points[idx].alpha;
        bound.witness_set = points[idx].witness;
    };
    fill(report.c_lower, best_c);
    if (best_r >= 0) fill(report.r_upper, best_r);
    return report;
}

std::vector<BlockLengths> enumerate_tuples(const BlockLengths& t_max) {
    for (int v : t_max.t)
        if (v < 0) throw InvalidInput("negative entry in tuple bound");
    std::vector<BlockLengths> out;
    BlockLengths cur;
    cur.t.assign(t_max.t.size(), 0);
    for (;;) {
        int pos = static_cast<int>(cur.t.size()) - 1;
        while (pos >= 0 && cur.t[pos] == t_max.t[pos]) {
            cur.t[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++cur.t[pos];
        out.push_back(cur);
    }
    return out;
}

std::vector<RegionPoint> region_sample(const SideInformationGraph& g, const BlockLengths& t_max,
                                       const RatesOptions& opts) {
    if (t_max.size() != g.node_count()) throw InvalidInput("tuple bound size mismatch");
    if (t_max.total_bits() > opts.total_bit_cap)
        throw LimitError("tuple bound needs " + std::to_string(t_max.total_bits()) +
                         " bits, cap is " + std::to_string(opts.total_bit_cap));
    const std::vector<BlockLengths> tuples = enumerate_tuples(t_max);

    const Budget budget(opts.timeout_seconds);
    std::vector<RegionPoint> out(tuples.size());
    parallel_for(static_cast<int>(tuples.size()), opts.threads, [&](int i) {
        const TupleEval p = evaluate_tuple(g, tuples[i], opts, budget);
        RegionPoint& point = out[i];
        point.t = p.t;
        point.alpha = p.alpha;
        point.chi_f = p.chi_f;
        point.capacity_defined = p.chi_f > 1;
        point.storage_defined = p.alpha > 1;
        for (int j = 0; j < p.t.size(); ++j) {
            if (point.capacity_defined)
                point.capacity.push_back(p.t.t[j] == 0 ? RateValue{0, 2}
                                                       : RateValue{Rational(p.t.t[j]), p.chi_f});
            if (point.storage_defined)
                point.storage.push_back(p.t.t[j] == 0
                                            ? RateValue{0, 2}
                                            : RateValue{Rational(p.t.t[j]), Rational(p.alpha)});
        }
    });
    return out;
}

}  // namespace confdual
