#include "confdual/fracchrom.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

#include "confdual/errors.hpp"
#include "confdual/independence.hpp"

namespace confdual {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
    std::optional<Clock::time_point> at;

    explicit Deadline(double seconds) {
        if (seconds > 0.0)
            at = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(seconds));
    }
    void check(const char* what) const {
        if (at && Clock::now() > *at)
            throw TimeoutError(std::string(what) + " exceeded its time budget");
    }
};

// Welsh-Powell first fit. The classes are independent and cover all
// vertices, which makes them a feasible seed pool for the covering LP.
std::vector<std::vector<int>> greedy_classes(const UndirectedGraph& g) {
    const int n = g.vertex_count();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return g.degree(a) > g.degree(b); });
    std::vector<int> color(n, -1);
    std::vector<std::vector<int>> classes;
    for (int v : order) {
        int c = 0;
        for (;; ++c) {
            bool ok = true;
            for (int u : g.neighbors(v))
                if (color[u] == c) {
                    ok = false;
                    break;
                }
            if (ok) break;
        }
        if (c == static_cast<int>(classes.size())) classes.emplace_back();
        color[v] = c;
        classes[c].push_back(v);
    }
    for (auto& cls : classes) std::sort(cls.begin(), cls.end());
    return classes;
}

struct RmpSolution {
    std::vector<Rational> y;   // dual-side variables, one per vertex
    std::vector<Rational> pi;  // row multipliers = primal column weights
    Rational value;
};

// Solves max 1'y subject to sum_{v in S_i} y_v <= 1 per pool set and y >= 0
// with an exact revised simplex in eta form. The pool stays small, so the
// basis has one row per pool set. Entering variable by largest reduced cost,
// switching to lowest-index (Bland) while pivots are degenerate.
RmpSolution solve_restricted_master(const std::vector<std::vector<int>>& pool, int n,
                                    const Deadline& deadline) {
    const int m = static_cast<int>(pool.size());
    std::vector<std::vector<int>> rows_of(n);
    for (int i = 0; i < m; ++i)
        for (int v : pool[i]) rows_of[v].push_back(i);
    for (int v = 0; v < n; ++v)
        if (rows_of[v].empty())
            throw Error("restricted master is missing a cover for vertex " + std::to_string(v));

    struct Eta {
        int r;
        Rational pivot;
        std::vector<std::pair<int, Rational>> off;  // nonzero entries besides r
    };
    std::vector<Eta> etas;

    auto ftran = [&](std::vector<Rational>& x) {
        for (const Eta& e : etas) {
            Rational t = x[e.r] / e.pivot;
            if (t != 0)
                for (const auto& [i, u] : e.off) x[i] -= u * t;
            x[e.r] = std::move(t);
        }
    };
    auto btran = [&](std::vector<Rational>& y) {
        for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
            Rational t = y[it->r];
            for (const auto& [i, u] : it->off) t -= y[i] * u;
            y[it->r] = t / it->pivot;
        }
    };

    // Variables 0..n-1 are the y values, n..n+m-1 the row slacks.
    std::vector<int> basis(m);
    std::vector<char> basic(n + m, 0);
    for (int i = 0; i < m; ++i) {
        basis[i] = n + i;
        basic[n + i] = 1;
    }
    std::vector<Rational> xb(m, Rational(1));
    std::vector<Rational> pi(m, Rational(0));
    bool bland = false;

    for (std::int64_t pivots = 0;; ++pivots) {
        if ((pivots & 63) == 0) deadline.check("fractional chromatic LP");
        if (pivots > std::int64_t(16) * (n + m) * (m + 2) + 4096)
            throw Error("restricted master failed to converge");

        pi.assign(m, Rational(0));
        for (int i = 0; i < m; ++i)
            if (basis[i] < n) pi[i] = 1;
        btran(pi);

        int enter = -1;
        Rational enter_d;
        auto consider = [&](int var, const Rational& d) {
            if (d <= 0) return;
            if (bland) {
                if (enter < 0 || var < enter) {
                    enter = var;
                    enter_d = d;
                }
            } else if (enter < 0 || d > enter_d) {
                enter = var;
                enter_d = d;
            }
        };
        for (int v = 0; v < n; ++v) {
            if (basic[v]) continue;
            Rational d(1);
            for (int i : rows_of[v]) d -= pi[i];
            consider(v, d);
        }
        for (int i = 0; i < m; ++i) {
            if (basic[n + i]) continue;
            consider(n + i, -pi[i]);
        }
        if (enter < 0) break;

        std::vector<Rational> u(m, Rational(0));
        if (enter < n)
            for (int i : rows_of[enter]) u[i] = 1;
        else
            u[enter - n] = 1;
        ftran(u);

        int leave = -1;
        Rational theta;
        for (int i = 0; i < m; ++i) {
            if (u[i] <= 0) continue;
            Rational ratio = xb[i] / u[i];
            if (leave < 0 || ratio < theta || (ratio == theta && basis[i] < basis[leave])) {
                leave = i;
                theta = std::move(ratio);
            }
        }
        if (leave < 0) throw Error("restricted master is unbounded");
        bland = theta == 0;

        for (int i = 0; i < m; ++i) {
            if (i == leave || u[i] == 0) continue;
            xb[i] -= u[i] * theta;
        }
        xb[leave] = theta;
        Eta e;
        e.r = leave;
        e.pivot = u[leave];
        for (int i = 0; i < m; ++i)
            if (i != leave && u[i] != 0) e.off.emplace_back(i, u[i]);
        etas.push_back(std::move(e));
        basic[basis[leave]] = 0;
        basic[enter] = 1;
        basis[leave] = enter;
    }

    RmpSolution sol;
    sol.y.assign(n, Rational(0));
    sol.value = 0;
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) {
            sol.y[basis[i]] = xb[i];
            sol.value += xb[i];
        }
    }
    sol.pi = std::move(pi);
    return sol;
}

// Shortcut for explicit translation graphs: chi_f = n/alpha with the uniform
// dual and the translate orbit of one maximum independent set as the primal
// cover. Every vertex lies in exactly alpha translates, so uniform weights
// 1/alpha cover each vertex exactly once, and the dual y = 1/alpha is
// feasible because no independent set has more than alpha vertices. Primal
// and dual totals agree at n/alpha, which certifies optimality with no
// simplex iterations. Translates of the solver's witness stay independent
// because the detector verified every edge is a pure difference.
ChromaticResult translation_chi_f(const UndirectedGraph& g, const FracChromOptions& opts) {
    const int n = g.vertex_count();
    IndependenceOptions iopts;
    iopts.vertex_cap = std::max<std::int64_t>(opts.lp_vertex_cap, n);
    iopts.timeout_seconds = opts.timeout_seconds;
    const auto cert = max_independent_set(g, iopts);

    ChromaticResult result;
    result.chi_f = Rational(n, cert.alpha);
    result.optimality_proof.assign(n, Rational(1, cert.alpha));
    result.coloring.value = result.chi_f;
    const Rational weight(1, cert.alpha);
    std::map<std::vector<int>, Rational> translates;
    for (int c = 0; c < n; ++c) {
        std::vector<int> set;
        set.reserve(cert.witness.size());
        for (int v : cert.witness) set.push_back(v ^ c);
        std::sort(set.begin(), set.end());
        translates[std::move(set)] += weight;
    }
    for (auto& [set, w] : translates) result.coloring.columns.emplace_back(set, w);

    std::vector<Rational> cover(n, Rational(0));
    Rational total(0);
    for (const auto& [set, w] : result.coloring.columns) {
        total += w;
        for (int v : set) cover[v] += w;
    }
    for (int v = 0; v < n; ++v)
        if (cover[v] != 1) throw Error("internal: translate cover misses a vertex");
    if (total != result.chi_f) throw Error("internal: translate cover total mismatch");
    return result;
}

int greedy_clique_size(const UndirectedGraph& g) {
    const int n = g.vertex_count();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return g.degree(a) > g.degree(b); });
    int best = 0;
    for (int start : order) {
        std::vector<int> clique = {start};
        for (int v : order) {
            if (v == start) continue;
            bool ok = true;
            for (int u : clique)
                if (!g.adjacent(u, v)) {
                    ok = false;
                    break;
                }
            if (ok) clique.push_back(v);
        }
        best = std::max(best, static_cast<int>(clique.size()));
        if (best == n) break;
    }
    return best;
}

struct ColoringSearch {
    const UndirectedGraph& g;
    const Deadline& deadline;
    int n;
    int best;                      // colors in the incumbent
    std::vector<int> best_colors;
    std::vector<int> colors;
    std::int64_t ticks = 0;

    ColoringSearch(const UndirectedGraph& graph, const Deadline& dl, int ub,
                   std::vector<int> ub_colors)
        : g(graph), deadline(dl), n(graph.vertex_count()), best(ub),
          best_colors(std::move(ub_colors)), colors(n, -1) {}

    void run(int colored, int used, int lower) {
        if ((++ticks & 255) == 0) deadline.check("chromatic number search");
        if (used >= best) return;
        if (colored == n) {
            best = used;
            best_colors = colors;
            return;
        }
        // most saturated uncolored vertex, ties by degree then index
        int pick = -1, pick_sat = -1;
        std::vector<char> seen(best + 1);
        for (int v = 0; v < n; ++v) {
            if (colors[v] >= 0) continue;
            std::fill(seen.begin(), seen.end(), 0);
            int sat = 0;
            for (int u : g.neighbors(v))
                if (colors[u] >= 0 && !seen[colors[u]]) {
                    seen[colors[u]] = 1;
                    ++sat;
                }
            if (pick < 0 || sat > pick_sat ||
                (sat == pick_sat && g.degree(v) > g.degree(pick))) {
                pick = v;
                pick_sat = sat;
            }
        }
        const int limit = std::min(used + 1, best - 1);
        for (int c = 0; c < limit; ++c) {
            bool ok = true;
            for (int u : g.neighbors(pick))
                if (colors[u] == c) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            if (std::max(used, c + 1) >= best) continue;
            colors[pick] = c;
            run(colored + 1, std::max(used, c + 1), lower);
            colors[pick] = -1;
            if (best <= lower) return;  // matched the clique bound, cannot improve
        }
    }
};

}  // namespace

ChromaticResult fractional_chromatic_lp(const UndirectedGraph& g, const FracChromOptions& opts) {
    const int n = g.vertex_count();
    if (n == 0) throw InvalidInput("fractional chromatic number of an empty graph");
    if (n > opts.lp_vertex_cap)
        throw LimitError("graph has " + std::to_string(n) + " vertices, LP cap is " +
                         std::to_string(opts.lp_vertex_cap));
    if (xor_difference_set(g)) return translation_chi_f(g, opts);
    Deadline deadline(opts.timeout_seconds);

    std::vector<std::vector<int>> pool = greedy_classes(g);
    IndependenceOptions oracle_opts;
    oracle_opts.vertex_cap = std::max<std::int64_t>(opts.lp_vertex_cap, n);
    oracle_opts.timeout_seconds = opts.timeout_seconds;
    IndependentSetOracle oracle(g, oracle_opts);

    const Rational one(1);
    ChromaticResult result;
    RmpSolution rmp;
    for (;;) {
        deadline.check("fractional chromatic LP");
        rmp = solve_restricted_master(pool, n, deadline);
        auto priced = oracle.max_weight(rmp.y, &one);
        ++result.pricing_rounds;
        if (priced.weight > one)
            pool.push_back(std::move(priced.witness));
        else
            break;
    }

    result.chi_f = rmp.value;
    result.optimality_proof = rmp.y;
    result.coloring.value = rmp.value;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (rmp.pi[i] > 0) result.coloring.columns.emplace_back(pool[i], rmp.pi[i]);

    // Exact certificate checks: primal covers every vertex, weights match,
    // dual is nonnegative with equal total. Dual feasibility over all
    // independent sets is the pricing loop's exit condition.
    Rational primal_total(0);
    std::vector<Rational> cover(n, Rational(0));
    for (const auto& [set, weight] : result.coloring.columns) {
        if (weight <= 0 || !is_independent(g, set))
            throw Error("internal: invalid LP column");
        primal_total += weight;
        for (int v : set) cover[v] += weight;
    }
    Rational dual_total(0);
    for (int v = 0; v < n; ++v) {
        if (cover[v] < one) throw Error("internal: LP cover misses a vertex");
        if (rmp.y[v] < 0) throw Error("internal: negative dual weight");
        dual_total += rmp.y[v];
    }
    if (primal_total != result.chi_f || dual_total != result.chi_f)
        throw Error("internal: LP certificates disagree");
    return result;
}

Rational fractional_chromatic_transitive(const ConfusionGraph& cg, const FracChromOptions& opts) {
    IndependenceOptions iopts;
    iopts.timeout_seconds = opts.timeout_seconds;
    const auto cert = max_independent_set(cg, iopts);
    BigInt verts = BigInt(1) << cg.total_bits();
    return Rational(std::move(verts), BigInt(cert.alpha));
}

int chromatic_number(const UndirectedGraph& g, const FracChromOptions& opts,
                     std::vector<int>* coloring_out) {
    const int n = g.vertex_count();
    if (n == 0) throw InvalidInput("chromatic number of an empty graph");
    if (n > opts.coloring_vertex_cap)
        throw LimitError("graph has " + std::to_string(n) + " vertices, coloring cap is " +
                         std::to_string(opts.coloring_vertex_cap));
    Deadline deadline(opts.timeout_seconds);

    const auto classes = greedy_classes(g);
    std::vector<int> greedy(n, -1);
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (int v : classes[c]) greedy[v] = static_cast<int>(c);
    const int upper = static_cast<int>(classes.size());
    const int lower = greedy_clique_size(g);

    ColoringSearch search(g, deadline, upper, std::move(greedy));
    if (lower < upper) search.run(0, 0, lower);

    for (int v = 0; v < n; ++v)
        for (int u : g.neighbors(v))
            if (u > v && search.best_colors[u] == search.best_colors[v])
                throw Error("internal: improper coloring");
    if (coloring_out) *coloring_out = search.best_colors;
    return search.best;
}

int b_fold_chromatic_upper(const UndirectedGraph& g, int b, const FracChromOptions& opts) {
    if (b < 1) throw InvalidInput("fold count must be positive");
    if (b == 1) return chromatic_number(g, opts);
    const int n = g.vertex_count();
    if (n == 0) throw InvalidInput("b-fold coloring of an empty graph");

    // Lexicographic blow-up: a proper coloring of g[K_b] assigns b distinct
    // colors per original vertex with disjoint sets across edges.
    UndirectedGraph blown(n * b);
    for (int v = 0; v < n; ++v) {
        for (int i = 0; i < b; ++i)
            for (int j = i + 1; j < b; ++j) blown.add_edge(v * b + i, v * b + j);
        for (int u : g.neighbors(v)) {
            if (u < v) continue;
            for (int i = 0; i < b; ++i)
                for (int j = 0; j < b; ++j) blown.add_edge(v * b + i, u * b + j);
        }
    }

    int value;
    if (n <= 32) {
        value = chromatic_number(blown, opts);
    } else {
        value = static_cast<int>(greedy_classes(blown).size());
    }

    if (n <= 256 && n <= opts.lp_vertex_cap) {
        const auto lp = fractional_chromatic_lp(g, opts);
        if (Rational(value, b) < lp.chi_f)
            throw Error("internal: b-fold upper bound fell below chi_f");
    }
    return value;
}

}  // namespace confdual
