#include "confdual/independence.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>

#include "confdual/errors.hpp"

namespace confdual {

namespace {

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int nbits) : words_((nbits + 63) / 64, 0) {}

    void resize(int nbits) { words_.assign((nbits + 63) / 64, 0); }
    void set(int i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(int i) { words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    bool empty() const {
        for (std::uint64_t w : words_)
            if (w) return false;
        return true;
    }
    int count() const {
        int c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }
    int find_first() const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i]) return static_cast<int>(i * 64 + std::countr_zero(words_[i]));
        return -1;
    }
    void clear() { std::fill(words_.begin(), words_.end(), 0); }
    bool intersects(const Bitset& o) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }
    // Index of the sole element of this & o, or -1 if empty, or -2 if the
    // intersection has two or more elements.
    int intersect_single(const Bitset& o) const {
        int found = -1;
        for (size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i] & o.words_[i];
            if (!w) continue;
            if (found >= 0 || (w & (w - 1))) return -2;
            found = static_cast<int>(i * 64 + std::countr_zero(w));
        }
        return found;
    }
    void assign_and(const Bitset& a, const Bitset& b) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] = a.words_[i] & b.words_[i];
    }
    void and_with(const Bitset& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    }
    void and_not(const Bitset& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    }
    Bitset& operator=(const Bitset& o) = default;
    Bitset(const Bitset& o) = default;
    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::vector<std::uint64_t> words_;
};

using Clock = std::chrono::steady_clock;

// Max clique search over "compatibility" rows (the complement of the graph
// whose independent sets are wanted). Candidates at each level are greedily
// colored; candidates are processed in reverse color order and the branch is
// cut once depth + color can no longer beat the incumbent.
// Invertible GF(2) map on tuple words; bit i of the image is the parity of
// rows[i] & x. Used to merge search branches that differ by a relabeling.
struct LinearMap {
    std::array<std::uint32_t, kDefaultTotalBitCap> rows;

    std::uint32_t apply(std::uint32_t x, int bits) const {
        std::uint32_t y = 0;
        for (int i = 0; i < bits; ++i)
            y |= static_cast<std::uint32_t>(std::popcount(rows[i] & x) & 1) << i;
        return y;
    }
};

class CliqueEngine {
public:
    CliqueEngine(std::vector<Bitset> compat, int n, double timeout_seconds)
        : compat_(std::move(compat)), n_(n) {
        if (timeout_seconds > 0.0)
            deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(timeout_seconds));
    }

    // Arms orbital pruning. Every group element must preserve the compat
    // relation and fix the implicit base vertex; the engine keeps the chain
    // of pointwise stabilizers of the chosen vertices' diffs, and when a
    // branch vertex is excluded its whole orbit under the current stabilizer
    // goes with it: a clique through an orbit mate maps to one through the
    // vertex, which the include-branch already explored.
    void set_symmetry(std::vector<LinearMap> group, const std::vector<std::uint32_t>& vertex_diff,
                      int bits, std::uint32_t space) {
        if (group.size() < kMinStab) return;
        sym_ = true;
        bits_ = bits;
        vdiff_ = vertex_diff;
        dvert_.assign(space, -1);
        for (int i = 0; i < n_; ++i) dvert_[vdiff_[i]] = i;
        stab_.clear();
        stab_.push_back(std::move(group));
        orbit_scratch_.resize(n_);
    }

    void run(const Bitset& root) {
        Bitset p = root;
        if (!p.empty()) expand(0, p);
    }

    // Searches root for a clique strictly larger than initial_bound. Returns
    // the improving clique, or empty if none exists. Node counts accumulate
    // across calls.
    std::vector<int> solve(const Bitset& root, int initial_bound) {
        best_ = initial_bound;
        best_set_.clear();
        cur_.clear();
        run(root);
        return best_set_;
    }

    int best_size() const { return best_; }
    const std::vector<int>& best_set() const { return best_set_; }
    std::int64_t nodes() const { return nodes_; }

private:
    struct Level {
        Bitset next_p;
        Bitset uncolored;
        Bitset avail;
        std::vector<int> order;
        std::vector<int> color;
    };

    Level& level(int depth) {
        while (static_cast<int>(levels_.size()) <= depth) {
            Level l;
            l.next_p.resize(n_);
            l.uncolored.resize(n_);
            l.avail.resize(n_);
            levels_.push_back(std::move(l));
        }
        return levels_[depth];
    }

    void tick() {
        if ((++nodes_ & 1023) == 0 && deadline_ && Clock::now() > *deadline_)
            throw TimeoutError("independence search exceeded its time budget");
    }

    // Vertices whose greedy color stays at or below kmin can never extend the
    // incumbent and are left unbranched. A vertex pushed above kmin gets a
    // repair attempt: if some low class conflicts with it through a single
    // member that fits elsewhere, the two swap and the vertex stays low. The
    // displaced member may itself displace one more vertex the same way.
    // A vertex evicted from class `from` can only have a conflict-free home
    // in a later class (earlier ones rejected it when it was first colored).
    bool relocate(int w, int kmin, int from, int banned, int depth) {
        for (int c2 = from + 1; c2 <= kmin; ++c2) {
            if (c2 == banned) continue;
            if (!cls_[c2].intersects(compat_[w])) {
                cls_[c2].set(w);
                return true;
            }
        }
        if (depth == 0) return false;
        for (int c2 = 1; c2 <= kmin; ++c2) {
            if (c2 == from || c2 == banned) continue;
            const int w2 = cls_[c2].intersect_single(compat_[w]);
            if (w2 == -1) {
                cls_[c2].set(w);
                return true;
            }
            if (w2 < 0) continue;
            cls_[c2].reset(w2);
            if (relocate(w2, kmin, c2, banned, depth - 1)) {
                cls_[c2].set(w);
                return true;
            }
            cls_[c2].set(w2);
        }
        return false;
    }

    bool try_recolor(int v, int kmin) {
        for (int c1 = 1; c1 <= kmin; ++c1) {
            const int w = cls_[c1].intersect_single(compat_[v]);
            if (w == -1) {
                cls_[c1].set(v);
                return true;
            }
            if (w < 0) continue;
            cls_[c1].reset(w);
            if (relocate(w, kmin, c1, c1, chain_depth_)) {
                cls_[c1].set(v);
                return true;
            }
            cls_[c1].set(w);
        }
        return false;
    }


    void child_stab(int depth, int v) {
        auto& child = stab_[depth + 1];
        child.clear();
        const std::uint32_t d = vdiff_[v];
        for (const auto& g : stab_[depth])
            if (g.apply(d, bits_) == d) child.push_back(g);
    }

    void expand(int depth, Bitset& p) {
        tick();
        const int cand = p.count();
        const int depth_size = static_cast<int>(cur_.size());
        if (depth_size + cand <= best_) return;
        bool use_sym = false;
        if (sym_) {
            while (static_cast<int>(stab_.size()) <= depth + 1) stab_.emplace_back();
            use_sym = stab_[depth].size() >= kMinStab;
            if (!use_sym) stab_[depth + 1].clear();
        }
        Level& lv = level(depth);
        if (static_cast<int>(lv.order.size()) < cand) {
            lv.order.resize(cand);
            lv.color.resize(cand);
        }
        lv.uncolored = p;
        const int kmin = best_ - depth_size;
        int m = 0;
        for (int c = 1; ; ++c) {
            int v = lv.uncolored.find_first();
            if (v < 0) break;
            while (static_cast<int>(cls_.size()) <= c) cls_.push_back(Bitset(n_));
            cls_[c].clear();
            lv.avail = lv.uncolored;
            while (v >= 0) {
                lv.avail.reset(v);
                lv.uncolored.reset(v);
                if (c > kmin && kmin >= 1 && try_recolor(v, kmin)) {
                    // placed in a low class; never branched at this node
                } else {
                    cls_[c].set(v);
                    lv.avail.and_not(compat_[v]);
                    if (c > kmin) {
                        lv.order[m] = v;
                        lv.color[m] = c;
                        ++m;
                    }
                }
                v = lv.avail.find_first();
            }
        }
        for (int i = m - 1; i >= 0; --i) {
            if (static_cast<int>(cur_.size()) + lv.color[i] <= best_) return;
            const int v = lv.order[i];
            Level& lnext = level(depth + 1);
            lnext.next_p.assign_and(p, compat_[v]);
            cur_.push_back(v);
            if (lnext.next_p.empty()) {
                if (static_cast<int>(cur_.size()) > best_) {
                    best_ = static_cast<int>(cur_.size());
                    best_set_ = cur_;
                }
            } else {
                if (use_sym) child_stab(depth, v);
                expand(depth + 1, lnext.next_p);
            }
            cur_.pop_back();
            if (use_sym) {
                orbit_scratch_.clear();
                const std::uint32_t d = vdiff_[v];
                for (const auto& g : stab_[depth]) {
                    const std::int32_t u = dvert_[g.apply(d, bits_)];
                    if (u >= 0) orbit_scratch_.set(u);
                }
                p.and_not(orbit_scratch_);
            } else {
                p.reset(v);
            }
        }
    }

    static constexpr std::size_t kMinStab = 2;

    std::vector<Bitset> compat_;
    int n_;
    std::optional<Clock::time_point> deadline_;
    std::int64_t nodes_ = 0;
    int best_ = 0;
    std::vector<int> best_set_;
    std::vector<int> cur_;
    std::deque<Level> levels_;
    std::vector<Bitset> cls_;
    static constexpr int chain_depth_ = 2;
    bool sym_ = false;
    int bits_ = 0;
    std::vector<std::uint32_t> vdiff_;
    std::vector<std::int32_t> dvert_;
    std::vector<std::vector<LinearMap>> stab_;
    Bitset orbit_scratch_{0};
};

// Incremental suffix search. Vertices are processed in reverse index order;
// c[i] holds the exact clique number of the subgraph induced by {i..k-1},
// and each step asks only whether v_i extends a clique of size c[i+1]. The
// c table then prunes inside the step searches: candidates at or past index
// j can contribute at most c[j] vertices. Tuple graphs in ascending value
// order nest subspaces along the suffixes, which keeps the table tight.
class SuffixCliqueEngine {
public:
    SuffixCliqueEngine(std::vector<Bitset> compat, int k, double timeout_seconds)
        : compat_(std::move(compat)), k_(k) {
        if (timeout_seconds > 0.0)
            deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(timeout_seconds));
    }

    // Returns a maximum clique of the whole graph.
    std::vector<int> solve() {
        c_.assign(k_ + 1, 0);
        Bitset tail(k_);
        Bitset r(k_);
        std::vector<int> best;
        for (int i = k_ - 1; i >= 0; --i) {
            cur_.assign(1, i);
            r.assign_and(tail, compat_[i]);
            found_ = false;
            search(r, c_[i + 1], 0);
            if (found_) {
                c_[i] = c_[i + 1] + 1;
                best = cur_;
            } else {
                c_[i] = c_[i + 1];
            }
            tail.set(i);
        }
        return best;
    }

    std::int64_t nodes() const { return nodes_; }

private:
    void tick() {
        if ((++nodes_ & 1023) == 0 && deadline_ && Clock::now() > *deadline_)
            throw TimeoutError("independence search exceeded its time budget");
    }

    Bitset& scratch(int depth) {
        while (static_cast<int>(scratch_.size()) <= depth)
            scratch_.push_back(Bitset(k_));
        return scratch_[depth];
    }

    // Finds any clique of exactly `needed` vertices inside r. On success
    // cur_ holds the chosen vertices and found_ is set.
    bool search(Bitset& r, int needed, int depth) {
        tick();
        if (needed == 0) {
            found_ = true;
            return true;
        }
        while (true) {
            const int j = r.find_first();
            if (j < 0) return false;
            if (c_[j] < needed) return false;
            if (r.count() < needed) return false;
            r.reset(j);
            Bitset& nr = scratch(depth);
            nr.assign_and(r, compat_[j]);
            cur_.push_back(j);
            if (search(nr, needed - 1, depth + 1)) return true;
            cur_.pop_back();
        }
    }

    std::vector<Bitset> compat_;
    int k_;
    std::optional<Clock::time_point> deadline_;
    std::int64_t nodes_ = 0;
    std::vector<int> c_;
    std::vector<int> cur_;
    bool found_ = false;
    std::deque<Bitset> scratch_;
};

// Weighted counterpart. The bound for the candidate prefix ending at
// position i is the sum of completed class maxima plus the running maximum
// of the class being emitted, all in scaled integer weights.
class WeightedCliqueEngine {
public:
    WeightedCliqueEngine(std::vector<Bitset> compat, int n, std::vector<BigInt> w,
                         double timeout_seconds, const BigInt* stop_above)
        : compat_(std::move(compat)), n_(n), w_(std::move(w)), stop_above_(stop_above) {
        if (timeout_seconds > 0.0)
            deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(timeout_seconds));
    }

    void run(const Bitset& root) {
        Bitset p = root;
        if (!p.empty()) expand(0, p);
    }

    const BigInt& best_weight() const { return best_w_; }
    const std::vector<int>& best_set() const { return best_set_; }
    bool stopped_early() const { return done_; }
    std::int64_t nodes() const { return nodes_; }

private:
    struct Level {
        Bitset next_p;
        Bitset uncolored;
        Bitset avail;
        std::vector<int> order;
        std::vector<BigInt> bound;
    };

    Level& level(int depth) {
        while (static_cast<int>(levels_.size()) <= depth) {
            Level l;
            l.next_p.resize(n_);
            l.uncolored.resize(n_);
            l.avail.resize(n_);
            levels_.push_back(std::move(l));
        }
        return levels_[depth];
    }

    void tick() {
        if ((++nodes_ & 1023) == 0 && deadline_ && Clock::now() > *deadline_)
            throw TimeoutError("weighted independence search exceeded its time budget");
    }

    void expand(int depth, Bitset& p) {
        tick();
        Level& lv = level(depth);
        const int cand = p.count();
        if (static_cast<int>(lv.order.size()) < cand) {
            lv.order.resize(cand);
            lv.bound.resize(cand);
        }
        lv.uncolored = p;
        int m = 0;
        BigInt completed = 0;
        for (;;) {
            int v = lv.uncolored.find_first();
            if (v < 0) break;
            lv.avail = lv.uncolored;
            BigInt class_max = 0;
            while (v >= 0) {
                lv.avail.reset(v);
                lv.avail.and_not(compat_[v]);
                lv.uncolored.reset(v);
                if (w_[v] > class_max) class_max = w_[v];
                lv.order[m] = v;
                lv.bound[m] = completed + class_max;
                ++m;
                v = lv.avail.find_first();
            }
            completed += class_max;
        }
        for (int i = m - 1; i >= 0; --i) {
            if (cur_w_ + lv.bound[i] <= best_w_) return;
            const int v = lv.order[i];
            Level& lnext = level(depth + 1);
            lnext.next_p.assign_and(p, compat_[v]);
            cur_.push_back(v);
            cur_w_ += w_[v];
            if (lnext.next_p.empty()) {
                if (cur_w_ > best_w_) {
                    best_w_ = cur_w_;
                    best_set_ = cur_;
                    if (stop_above_ && best_w_ > *stop_above_) done_ = true;
                }
            } else {
                expand(depth + 1, lnext.next_p);
            }
            cur_.pop_back();
            cur_w_ -= w_[v];
            if (done_) return;
            p.reset(v);
        }
    }

    std::vector<Bitset> compat_;
    int n_;
    std::vector<BigInt> w_;
    const BigInt* stop_above_;
    std::optional<Clock::time_point> deadline_;
    std::int64_t nodes_ = 0;
    BigInt best_w_ = 0;
    BigInt cur_w_ = 0;
    std::vector<int> best_set_;
    std::vector<int> cur_;
    std::deque<Level> levels_;
    bool done_ = false;
};

// Rows of the complement restricted to `keep`, in the order given by `keep`
// (which therefore fixes the search order).
std::vector<Bitset> complement_rows(const UndirectedGraph& g, const std::vector<int>& keep) {
    const int k = static_cast<int>(keep.size());
    std::vector<int> pos(g.vertex_count(), -1);
    for (int i = 0; i < k; ++i) pos[keep[i]] = i;
    std::vector<Bitset> rows(k, Bitset(k));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j)
            if (j != i) rows[i].set(j);
        for (int nb : g.neighbors(keep[i])) {
            if (pos[nb] >= 0) rows[i].reset(pos[nb]);
        }
    }
    return rows;
}

// Search order heuristic: descending degree in the complement (ascending in
// g), ties by index. Deterministic.
std::vector<int> ordered_vertices(const UndirectedGraph& g, const std::vector<int>& verts) {
    std::vector<int> order = verts;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return g.degree(a) < g.degree(b); });
    return order;
}

BigInt scale_weights(const std::vector<Rational>& w, std::vector<BigInt>* out) {
    BigInt denom_lcm = 1;
    for (const Rational& x : w) {
        if (x < 0) throw InvalidInput("weights must be nonnegative");
        denom_lcm = boost::multiprecision::lcm(denom_lcm, rational_den(x));
    }
    out->clear();
    out->reserve(w.size());
    for (const Rational& x : w)
        out->push_back(rational_num(x) * (denom_lcm / rational_den(x)));
    return denom_lcm;
}

// Maximum independent set through the zero tuple of a translation-invariant
// graph, searched as a clique over the safe differences. Every solver path
// that reaches such a graph funnels here, with or without a symmetry group.
// Returns the witness (always containing 0) and the node count.
template <typename Confusable>
std::pair<std::vector<std::uint32_t>, std::int64_t> search_diff_space(
    const std::vector<std::uint32_t>& safe, std::uint32_t space, int bits,
    Confusable&& confusable, std::vector<LinearMap> group, const IndependenceOptions& opts) {
    const int k = static_cast<int>(safe.size());
    std::vector<int> compat_degree(k, 0);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (!confusable(safe[i] ^ safe[j])) {
                ++compat_degree[i];
                ++compat_degree[j];
            }
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return compat_degree[a] > compat_degree[b]; });

    std::vector<Bitset> rows(k, Bitset(k));
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (!confusable(safe[order[i]] ^ safe[order[j]])) {
                rows[i].set(j);
                rows[j].set(i);
            }
    CliqueEngine engine(std::move(rows), k, opts.timeout_seconds);

    // Greedy first-fit over a few deterministic orders seeds the incumbent.
    auto greedy = [&](auto&& index_seq) {
        std::vector<std::uint32_t> sel;
        for (int idx : index_seq) {
            const std::uint32_t d = safe[idx];
            bool ok = true;
            for (std::uint32_t s : sel)
                if (confusable(d ^ s)) {
                    ok = false;
                    break;
                }
            if (ok) sel.push_back(d);
        }
        return sel;
    };
    std::vector<int> asc(k), desc(k);
    std::iota(asc.begin(), asc.end(), 0);
    for (int i = 0; i < k; ++i) desc[i] = k - 1 - i;
    std::vector<std::uint32_t> incumbent = greedy(asc);
    for (const auto& seq : {desc, order}) {
        auto s = greedy(seq);
        if (s.size() > incumbent.size()) incumbent = std::move(s);
    }
    // Subgroup incumbent: grow a linear span whose nonzero elements are all
    // safe. Group codes often match or beat pointwise greedy here, and a
    // maximum witness frequently is one. The scan is restarted once per
    // seed diff because the first pick decides which subgroup the greedy
    // extension can reach.
    {
        std::vector<std::uint32_t> stamp(space, 0);
        std::uint32_t epoch = 0;
        std::vector<std::uint32_t> span, best_span;
        for (std::uint32_t seed : safe) {
            ++epoch;
            stamp[0] = epoch;
            span.assign(1, 0);
            auto grow = [&](std::uint32_t d) {
                if (stamp[d] == epoch) return;
                for (std::uint32_t s : span)
                    if (confusable(s ^ d)) return;
                const std::size_t sz = span.size();
                for (std::size_t i = 0; i < sz; ++i) {
                    const std::uint32_t e = span[i] ^ d;
                    span.push_back(e);
                    stamp[e] = epoch;
                }
            };
            grow(seed);
            for (std::uint32_t d : safe) grow(d);
            if (span.size() > best_span.size()) best_span = span;
        }
        if (best_span.size() > incumbent.size() + 1)
            incumbent.assign(best_span.begin() + 1, best_span.end());
    }
    std::vector<std::uint32_t> best_witness = {0};
    best_witness.insert(best_witness.end(), incumbent.begin(), incumbent.end());
    const int best = static_cast<int>(best_witness.size());

    if (!group.empty()) {
        std::vector<std::uint32_t> vdiff(k);
        for (int i = 0; i < k; ++i) vdiff[i] = safe[order[i]];
        engine.set_symmetry(std::move(group), vdiff, bits, space);
    }
    Bitset root(k);
    for (int i = 0; i < k; ++i) root.set(i);
    auto found = engine.solve(root, best - 1);
    if (!found.empty()) {
        best_witness = {0};
        for (int i : found) best_witness.push_back(safe[order[i]]);
    }
    return {std::move(best_witness), engine.nodes()};
}

}  // namespace

IndependenceCertificate max_independent_set(const UndirectedGraph& g,
                                            const IndependenceOptions& opts) {
    if (g.vertex_count() > opts.vertex_cap)
        throw LimitError("graph has " + std::to_string(g.vertex_count()) +
                         " vertices, solver cap is " + std::to_string(opts.vertex_cap));
    IndependenceCertificate cert;
    // Vertices without neighbors belong to every maximum independent set.
    std::vector<int> isolated, rest;
    for (int v = 0; v < g.vertex_count(); ++v)
        (g.degree(v) == 0 ? isolated : rest).push_back(v);
    cert.witness = isolated;
    if (rest.empty()) {
        cert.alpha = static_cast<int>(isolated.size());
        return cert;
    }
    // Translation-invariant graphs get the difference-space reduction: some
    // maximum independent set passes through vertex 0, so only the safe
    // diffs are searched. No isolated vertices survive to this point, hence
    // the difference set is nonempty and the witness starts empty.
    if (auto diffs = xor_difference_set(g)) {
        const auto space = static_cast<std::uint32_t>(g.vertex_count());
        std::vector<char> in_diffs(space, 0);
        for (std::uint32_t d : *diffs) in_diffs[d] = 1;
        std::vector<std::uint32_t> safe;
        for (std::uint32_t d = 1; d < space; ++d)
            if (!in_diffs[d]) safe.push_back(d);
        if (safe.empty()) {
            cert.alpha = 1;
            cert.witness = {0};
            return cert;
        }
        auto [witness, nodes] = search_diff_space(
            safe, space, std::countr_zero(space),
            [&in_diffs](std::uint32_t d) { return in_diffs[d] != 0; },
            std::vector<LinearMap>{}, opts);
        cert.nodes_explored = nodes;
        for (std::uint32_t v : witness) cert.witness.push_back(static_cast<int>(v));
        std::sort(cert.witness.begin(), cert.witness.end());
        cert.alpha = static_cast<int>(cert.witness.size());
        return cert;
    }
    std::vector<int> order = ordered_vertices(g, rest);
    CliqueEngine engine(complement_rows(g, order), static_cast<int>(order.size()),
                        opts.timeout_seconds);
    Bitset root(static_cast<int>(order.size()));
    for (int i = 0; i < static_cast<int>(order.size()); ++i) root.set(i);
    engine.run(root);
    cert.nodes_explored = engine.nodes();
    for (int i : engine.best_set()) cert.witness.push_back(order[i]);
    std::sort(cert.witness.begin(), cert.witness.end());
    cert.alpha = static_cast<int>(cert.witness.size());
    return cert;
}

namespace {

// Node permutations preserving the side-information structure and block
// lengths. Bails out to the identity once `limit` automorphisms are found;
// callers use the group only to merge search branches, so a subgroup is
// always sound.
std::vector<std::vector<int>> node_automorphisms(const SideInformationGraph& g,
                                                 const BlockLengths& t, size_t limit) {
    const int n = g.node_count();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    std::vector<int> outdeg(n, 0);
    for (int j = 0; j < n; ++j)
        for (int i : g.in_set(j)) {
            adj[i][j] = 1;
            ++outdeg[i];
        }
    std::vector<std::int64_t> sig(n);
    for (int j = 0; j < n; ++j)
        sig[j] = (static_cast<std::int64_t>(t.t[j]) << 40) +
                 (static_cast<std::int64_t>(g.in_set(j).size()) << 20) + outdeg[j];

    std::vector<std::vector<int>> out;
    std::vector<int> perm(n, -1);
    std::vector<char> used(n, 0);
    bool bailed = false;
    auto rec = [&](auto&& self, int pos) -> void {
        if (bailed) return;
        if (pos == n) {
            out.push_back(perm);
            if (out.size() > limit) bailed = true;
            return;
        }
        for (int q = 0; q < n && !bailed; ++q) {
            if (used[q] || sig[q] != sig[pos]) continue;
            bool ok = true;
            for (int p = 0; p < pos; ++p)
                if (adj[pos][p] != adj[q][perm[p]] || adj[p][pos] != adj[perm[p]][q]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            perm[pos] = q;
            used[q] = 1;
            self(self, pos + 1);
            used[q] = 0;
            perm[pos] = -1;
        }
    };
    rec(rec, 0);
    if (bailed || out.empty()) {
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 0);
        return {id};
    }
    return out;
}

// All invertible t x t matrices over GF(2), each as row masks. Beyond t = 4
// enumeration is pointless and the identity stands in.
std::vector<std::vector<std::uint32_t>> invertible_matrices(int t) {
    std::vector<std::uint32_t> identity(t);
    for (int i = 0; i < t; ++i) identity[i] = std::uint32_t(1) << i;
    if (t == 0) return {{}};
    if (t > 4) return {identity};
    std::vector<std::vector<std::uint32_t>> out;
    const std::uint64_t total = std::uint64_t(1) << (t * t);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::uint32_t> rows(t);
        for (int i = 0; i < t; ++i)
            rows[i] = static_cast<std::uint32_t>((code >> (i * t)) & ((1u << t) - 1));
        auto elim = rows;
        bool singular = false;
        for (int col = 0; col < t && !singular; ++col) {
            int pivot = -1;
            for (int r = col; r < t; ++r)
                if (elim[r] >> col & 1) {
                    pivot = r;
                    break;
                }
            if (pivot < 0) {
                singular = true;
                break;
            }
            std::swap(elim[col], elim[pivot]);
            for (int r = 0; r < t; ++r)
                if (r != col && (elim[r] >> col & 1)) elim[r] ^= elim[col];
        }
        if (!singular) out.push_back(std::move(rows));
    }
    return out;
}

// Linear maps of the tuple space preserving the confusable difference set:
// block permutations from side-information automorphisms composed with any
// relabeling of each block's values. Confusability depends only on which
// blocks differ, so both factors preserve it. If the full product exceeds
// `cap`, blocks drop their relabeling factor largest-first; any subgroup is
// sound for branch merging.
std::vector<LinearMap> diff_symmetry_group(const ConfusionGraph& cg, std::size_t cap) {
    const int n = cg.base().node_count();
    const int bits = cg.total_bits();
    const auto perms = node_automorphisms(cg.base(), cg.block_lengths(), 4096);

    std::vector<std::vector<std::vector<std::uint32_t>>> gl(n);
    std::size_t total = perms.size();
    for (int j = 0; j < n; ++j) {
        gl[j] = invertible_matrices(cg.block_lengths().t[j]);
        total *= gl[j].size();
    }
    while (total > cap) {
        int widest = -1;
        for (int j = 0; j < n; ++j)
            if (gl[j].size() > 1 && (widest < 0 || gl[j].size() > gl[widest].size())) widest = j;
        if (widest < 0) break;
        total /= gl[widest].size();
        std::vector<std::uint32_t> identity(cg.block_lengths().t[widest]);
        for (std::size_t b = 0; b < identity.size(); ++b) identity[b] = std::uint32_t(1) << b;
        gl[widest] = {identity};
    }

    std::vector<int> offset(n, 0);
    for (int j = 0; j < n; ++j)
        if (cg.block_mask(j)) offset[j] = std::countr_zero(cg.block_mask(j));

    std::vector<LinearMap> group;
    std::vector<std::size_t> choice(n, 0);
    for (const auto& perm : perms) {
        std::fill(choice.begin(), choice.end(), 0);
        for (;;) {
            LinearMap m{};
            for (int j = 0; j < n; ++j) {
                const auto& rows = gl[j][choice[j]];
                for (std::size_t b = 0; b < rows.size(); ++b)
                    m.rows[offset[perm[j]] + b] = rows[b] << offset[j];
            }
            group.push_back(m);
            int j = 0;
            while (j < n && ++choice[j] == gl[j].size()) choice[j++] = 0;
            if (j == n) break;
        }
    }
    std::sort(group.begin(), group.end(),
              [](const LinearMap& a, const LinearMap& b) { return a.rows < b.rows; });
    group.erase(std::unique(group.begin(), group.end(),
                            [](const LinearMap& a, const LinearMap& b) { return a.rows == b.rows; }),
                group.end());

    // Structural safety net: every map must fix the confusable set. Checked
    // exhaustively when cheap, on a prefix otherwise.
    const auto& diffs = cg.confusable_diffs();
    const std::size_t budget = (std::size_t(1) << 22) / std::max<std::size_t>(group.size(), 1);
    const std::size_t sample = std::min(diffs.size(), std::max<std::size_t>(budget, 64));
    for (const auto& g : group)
        for (std::size_t i = 0; i < sample; ++i)
            if (!cg.confusable_diff(g.apply(diffs[i], bits)))
                throw Error("internal: symmetry map broke the confusable set");
    return group;
}

}  // namespace

TupleIndependenceCertificate max_independent_set(const ConfusionGraph& cg,
                                                 const IndependenceOptions& opts) {
    TupleIndependenceCertificate cert;
    // Some maximum independent set contains the zero tuple (translate any
    // witness by one of its members), so search only diffs compatible with 0.
    std::vector<std::uint32_t> safe;
    const std::uint32_t space = static_cast<std::uint32_t>(cg.vertex_count());
    for (std::uint32_t d = 1; d < space; ++d)
        if (!cg.confusable_diff(d)) safe.push_back(d);
    if (safe.empty()) {
        cert.alpha = 1;
        cert.witness = {0};
        return cert;
    }
    const int k = static_cast<int>(safe.size());
    if (k > opts.vertex_cap)
        throw LimitError("confusion graph reduction has " + std::to_string(k) +
                         " candidate diffs, solver cap is " + std::to_string(opts.vertex_cap));

    ConfusionEngine which = opts.engine;
    if (which == ConfusionEngine::kAuto) which = ConfusionEngine::kOrbit;
    if (which == ConfusionEngine::kSuffix) {
        // Ascending diff order nests the tuple space along engine suffixes.
        std::vector<Bitset> rows(k, Bitset(k));
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (!cg.confusable_diff(safe[i] ^ safe[j])) {
                    rows[i].set(j);
                    rows[j].set(i);
                }
        SuffixCliqueEngine engine(std::move(rows), k, opts.timeout_seconds);
        auto clique = engine.solve();
        cert.witness = {0};
        for (int i : clique) cert.witness.push_back(safe[i]);
        std::sort(cert.witness.begin(), cert.witness.end());
        cert.alpha = static_cast<std::int64_t>(cert.witness.size());
        cert.nodes_explored = engine.nodes();
        return cert;
    }

    // Adjacency depends only on which blocks differ, so block relabelings and
    // structure-preserving node permutations act on the safe diffs. Hand the
    // group to the engine for orbital pruning.
    auto [witness, nodes] = search_diff_space(
        safe, space, cg.total_bits(),
        [&cg](std::uint32_t d) { return cg.confusable_diff(d); },
        diff_symmetry_group(cg, 200000), opts);

    cert.nodes_explored = nodes;
    cert.witness = std::move(witness);
    std::sort(cert.witness.begin(), cert.witness.end());
    cert.alpha = static_cast<std::int64_t>(cert.witness.size());
    return cert;
}

namespace {

WeightedIndependenceResult run_weighted(const UndirectedGraph& g,
                                        const std::vector<Rational>& w,
                                        const IndependenceOptions& opts,
                                        const Rational* stop_above,
                                        const std::vector<Bitset>* prebuilt_rows,
                                        const std::vector<int>* prebuilt_order) {
    if (static_cast<int>(w.size()) != g.vertex_count())
        throw InvalidInput("weight vector has " + std::to_string(w.size()) +
                           " entries for " + std::to_string(g.vertex_count()) + " vertices");
    std::vector<BigInt> scaled;
    const BigInt denom = scale_weights(w, &scaled);

    std::vector<int> order;
    std::vector<Bitset> rows;
    if (prebuilt_rows) {
        order = *prebuilt_order;
        rows = *prebuilt_rows;
    } else {
        std::vector<int> verts(g.vertex_count());
        std::iota(verts.begin(), verts.end(), 0);
        order = ordered_vertices(g, verts);
        rows = complement_rows(g, order);
    }
    const int k = static_cast<int>(order.size());
    std::vector<BigInt> wperm(k);
    Bitset root(k);
    for (int i = 0; i < k; ++i) {
        wperm[i] = scaled[order[i]];
        if (wperm[i] > 0) root.set(i);
    }
    BigInt stop_scaled;
    const BigInt* stop_ptr = nullptr;
    if (stop_above) {
        // stop_above = s/t against weight W/denom: compare W*t > s*denom.
        // Rescale the threshold into the engine's integer domain instead:
        // engine compares best > stop_scaled with stop_scaled in units of
        // 1/(denom * den(stop)). Multiply everything by den(stop).
        const BigInt sd = rational_den(*stop_above);
        if (sd != 1) {
            for (auto& x : wperm) x *= sd;
        }
        stop_scaled = rational_num(*stop_above) * denom;
        stop_ptr = &stop_scaled;
    }
    WeightedCliqueEngine engine(std::move(rows), k, std::move(wperm), opts.timeout_seconds,
                                stop_ptr);
    engine.run(root);

    WeightedIndependenceResult res;
    res.nodes_explored = engine.nodes();
    res.stopped_early = engine.stopped_early();
    BigInt scale = denom;
    if (stop_above) scale *= rational_den(*stop_above);
    res.weight = Rational(engine.best_weight()) / Rational(scale);
    for (int i : engine.best_set()) res.witness.push_back(order[i]);
    std::sort(res.witness.begin(), res.witness.end());
    return res;
}

}  // namespace

WeightedIndependenceResult max_weight_independent_set(const UndirectedGraph& g,
                                                      const std::vector<Rational>& w,
                                                      const IndependenceOptions& opts,
                                                      const Rational* stop_above) {
    if (g.vertex_count() > opts.vertex_cap)
        throw LimitError("graph has " + std::to_string(g.vertex_count()) +
                         " vertices, solver cap is " + std::to_string(opts.vertex_cap));
    return run_weighted(g, w, opts, stop_above, nullptr, nullptr);
}

bool is_independent(const UndirectedGraph& g, const std::vector<int>& s) {
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0 || s[i] >= g.vertex_count())
            throw InvalidInput("vertex " + std::to_string(s[i]) + " out of range");
        for (size_t j = i + 1; j < s.size(); ++j) {
            if (s[i] == s[j]) return false;  // repeated vertex is not a set
            if (g.adjacent(s[i], s[j])) return false;
        }
    }
    return true;
}

bool is_independent(const ConfusionGraph& cg, const std::vector<std::uint32_t>& s) {
    const std::uint32_t space = static_cast<std::uint32_t>(cg.vertex_count());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] >= space) throw InvalidInput("tuple out of range");
        for (size_t j = i + 1; j < s.size(); ++j) {
            if (s[i] == s[j]) return false;  // repeated tuple is not a set
            if (cg.confusable_diff(s[i] ^ s[j])) return false;
        }
    }
    return true;
}

struct IndependentSetOracle::Impl {
    UndirectedGraph graph;
    IndependenceOptions opts;
    // Vertices with identical neighborhoods collapse into one class: such
    // vertices are pairwise nonadjacent and interchangeable, so some optimum
    // takes all of a class or none of it. Blow-up style graphs shrink a lot.
    std::vector<int> class_of;
    std::vector<std::vector<int>> members;
    UndirectedGraph contracted;
    std::vector<int> order;
    std::vector<Bitset> rows;

    Impl(const UndirectedGraph& g, IndependenceOptions o)
        : graph(g), opts(o), contracted(g.vertex_count()) {
        const int n = g.vertex_count();
        class_of.assign(n, -1);
        std::map<std::vector<std::uint64_t>, int> groups;
        std::vector<Bitset> adj(n, Bitset(n));
        for (int v = 0; v < n; ++v)
            for (int u : g.neighbors(v)) adj[v].set(u);
        for (int v = 0; v < n; ++v) {
            auto [it, fresh] = groups.try_emplace(adj[v].words(), static_cast<int>(members.size()));
            if (fresh) members.push_back({});
            class_of[v] = it->second;
            members[it->second].push_back(v);
        }
        const int nc = static_cast<int>(members.size());
        contracted = UndirectedGraph(nc);
        for (int c1 = 0; c1 < nc; ++c1)
            for (int c2 = c1 + 1; c2 < nc; ++c2)
                if (adj[members[c1][0]].test(members[c2][0])) contracted.add_edge(c1, c2);
        std::vector<int> verts(nc);
        std::iota(verts.begin(), verts.end(), 0);
        order = ordered_vertices(contracted, verts);
        rows = complement_rows(contracted, order);
    }
};

IndependentSetOracle::IndependentSetOracle(const UndirectedGraph& g, IndependenceOptions opts)
    : impl_(std::make_unique<Impl>(g, opts)) {
    if (g.vertex_count() > opts.vertex_cap)
        throw LimitError("graph has " + std::to_string(g.vertex_count()) +
                         " vertices, solver cap is " + std::to_string(opts.vertex_cap));
}
IndependentSetOracle::~IndependentSetOracle() = default;
IndependentSetOracle::IndependentSetOracle(IndependentSetOracle&&) noexcept = default;
IndependentSetOracle& IndependentSetOracle::operator=(IndependentSetOracle&&) noexcept =
    default;

WeightedIndependenceResult IndependentSetOracle::max_weight(const std::vector<Rational>& w,
                                                            const Rational* stop_above) const {
    const int n = impl_->graph.vertex_count();
    if (static_cast<int>(w.size()) != n)
        throw InvalidInput("weight vector has " + std::to_string(w.size()) + " entries for " +
                           std::to_string(n) + " vertices");
    const int nc = static_cast<int>(impl_->members.size());
    std::vector<Rational> wc(nc, Rational(0));
    for (int v = 0; v < n; ++v) wc[impl_->class_of[v]] += w[v];
    auto res =
        run_weighted(impl_->contracted, wc, impl_->opts, stop_above, &impl_->rows, &impl_->order);
    std::vector<int> full;
    for (int c : res.witness)
        full.insert(full.end(), impl_->members[c].begin(), impl_->members[c].end());
    std::sort(full.begin(), full.end());
    res.witness = std::move(full);
    return res;
}

IndependenceCertificate IndependentSetOracle::max_cardinality() const {
    return max_independent_set(impl_->graph, impl_->opts);
}

}  // namespace confdual
