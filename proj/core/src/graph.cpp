#include "confdual/graph.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "confdual/errors.hpp"

namespace confdual {

SideInformationGraph::SideInformationGraph(int n) : n_(n) {
    if (n < 1) throw InvalidInput("node count must be positive, got " + std::to_string(n));
    in_sets_.resize(n);
}

bool SideInformationGraph::has_edge(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw InvalidInput("edge endpoint out of range");
    const auto& s = in_sets_[j];
    return std::binary_search(s.begin(), s.end(), i);
}

void SideInformationGraph::add_edge(int i, int j) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw InvalidInput("edge endpoint out of range");
    if (i == j) throw InvalidInput("self-loop not allowed");
    auto& s = in_sets_[j];
    auto it = std::lower_bound(s.begin(), s.end(), i);
    if (it == s.end() || *it != i) s.insert(it, i);
}

std::int64_t SideInformationGraph::edge_count() const {
    std::int64_t c = 0;
    for (const auto& s : in_sets_) c += static_cast<std::int64_t>(s.size());
    return c;
}

UndirectedGraph::UndirectedGraph(int vertex_count, std::int64_t vertex_cap) : n_(vertex_count) {
    if (vertex_count < 1)
        throw InvalidInput("vertex count must be positive, got " + std::to_string(vertex_count));
    if (vertex_count > vertex_cap)
        throw LimitError("vertex count " + std::to_string(vertex_count) + " exceeds cap " +
                         std::to_string(vertex_cap));
    adj_.resize(vertex_count);
}

bool UndirectedGraph::adjacent(int a, int b) const {
    if (a < 0 || a >= n_ || b < 0 || b >= n_)
        throw InvalidInput("vertex out of range");
    if (a == b) return false;
    const auto& s = adj_[a];
    return std::binary_search(s.begin(), s.end(), b);
}

void UndirectedGraph::add_edge(int a, int b) {
    if (a < 0 || a >= n_ || b < 0 || b >= n_)
        throw InvalidInput("vertex out of range");
    if (a == b) throw InvalidInput("self-loop not allowed");
    auto& sa = adj_[a];
    auto it = std::lower_bound(sa.begin(), sa.end(), b);
    if (it != sa.end() && *it == b) return;
    sa.insert(it, b);
    auto& sb = adj_[b];
    sb.insert(std::lower_bound(sb.begin(), sb.end(), a), a);
    ++edges_;
}

int BlockLengths::total_bits() const {
    int s = 0;
    for (int x : t) {
        if (x < 0) throw InvalidInput("block length must be nonnegative, got " + std::to_string(x));
        s += x;
    }
    return s;
}

std::string BlockLengths::to_display_string() const {
    std::string out;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(t[i]);
    }
    return out;
}

namespace {

struct Line {
    int number;
    std::string text;
};

std::vector<Line> significant_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        out.push_back({number, line});
    }
    return out;
}

struct EdgeLine {
    char kind;  // 'e' or 'u'
    int a, b;   // 0-indexed
    int number;
};

struct ParsedGraphFile {
    int n;
    std::vector<EdgeLine> edges;
};

ParsedGraphFile parse_graph_file(const std::string& text) {
    auto lines = significant_lines(text);
    if (lines.empty()) throw ParseError("missing 'n' line");

    ParsedGraphFile out;
    bool have_n = false;
    for (const auto& [number, raw] : lines) {
        std::istringstream ls(raw);
        std::string tag;
        ls >> tag;
        if (tag == "n") {
            if (have_n) throw ParseError("duplicate 'n' line", number);
            long long n;
            std::string extra;
            if (!(ls >> n) || (ls >> extra))
                throw ParseError("malformed 'n' line: " + raw, number);
            if (n < 1) throw ParseError("node count must be positive", number);
            if (n > kDefaultExplicitVertexCap)
                throw ParseError("node count too large", number);
            out.n = static_cast<int>(n);
            have_n = true;
        } else if (tag == "e" || tag == "u") {
            if (!have_n) throw ParseError("edge line before 'n' line", number);
            long long a, b;
            std::string extra;
            if (!(ls >> a >> b) || (ls >> extra))
                throw ParseError("malformed edge line: " + raw, number);
            if (a < 1 || a > out.n || b < 1 || b > out.n)
                throw ParseError("endpoint out of range [1," + std::to_string(out.n) + "]",
                                 number);
            if (a == b) throw ParseError("self-loop not allowed", number);
            out.edges.push_back({tag[0], static_cast<int>(a - 1), static_cast<int>(b - 1),
                                 number});
        } else {
            throw ParseError("unknown line tag '" + tag + "'", number);
        }
    }
    if (!have_n) throw ParseError("missing 'n' line");
    for (const auto& e : out.edges)
        if (e.kind != out.edges.front().kind)
            throw ParseError("mixed 'e' and 'u' lines in one file", e.number);
    return out;
}

}  // namespace

SideInformationGraph parse_side_information_graph(const std::string& text) {
    auto parsed = parse_graph_file(text);
    SideInformationGraph g(parsed.n);
    for (const auto& e : parsed.edges) {
        if (e.kind != 'e')
            throw ParseError("expected directed 'e' line in side-information graph", e.number);
        g.add_edge(e.a, e.b);
    }
    return g;
}

UndirectedGraph parse_undirected_graph(const std::string& text, std::int64_t vertex_cap) {
    auto parsed = parse_graph_file(text);
    if (parsed.n > vertex_cap)
        throw LimitError("vertex count " + std::to_string(parsed.n) + " exceeds cap " +
                         std::to_string(vertex_cap));
    UndirectedGraph g(parsed.n, vertex_cap);
    for (const auto& e : parsed.edges) {
        if (e.kind != 'u')
            throw ParseError("expected undirected 'u' line in graph file", e.number);
        g.add_edge(e.a, e.b);
    }
    return g;
}

bool graph_file_is_undirected(const std::string& text) {
    auto parsed = parse_graph_file(text);
    return !parsed.edges.empty() && parsed.edges.front().kind == 'u';
}

std::string serialize(const SideInformationGraph& g) {
    std::string out = "n " + std::to_string(g.node_count()) + "\n";
    for (int j = 0; j < g.node_count(); ++j)
        for (int i : g.in_set(j))
            out += "e " + std::to_string(i + 1) + " " + std::to_string(j + 1) + "\n";
    return out;
}

std::string serialize(const UndirectedGraph& g) {
    std::string out = "n " + std::to_string(g.vertex_count()) + "\n";
    for (int a = 0; a < g.vertex_count(); ++a)
        for (int b : g.neighbors(a))
            if (a < b) out += "u " + std::to_string(a + 1) + " " + std::to_string(b + 1) + "\n";
    return out;
}

namespace {

// Draw one uniform-in-[0,1) decision per candidate edge. An explicit
// threshold on the raw 64-bit stream keeps results identical across standard
// library implementations, unlike std::bernoulli_distribution.
class EdgeCoin {
public:
    explicit EdgeCoin(double p, std::uint64_t seed) : rng_(seed) {
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidInput("edge probability must lie in [0,1]");
        p_ = p;
    }
    bool flip() {
        constexpr double kScale = 1.0 / 18446744073709551616.0;  // 2^-64
        return static_cast<double>(rng_()) * kScale < p_;
    }

private:
    std::mt19937_64 rng_;
    double p_;
};

}  // namespace

SideInformationGraph random_digraph(int n, double p, std::uint64_t seed) {
    SideInformationGraph g(n);
    EdgeCoin coin(p, seed);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (coin.flip()) g.add_edge(i, j);
        }
    return g;
}

UndirectedGraph random_undirected_graph(int n, double p, std::uint64_t seed) {
    UndirectedGraph g(n);
    EdgeCoin coin(p, seed);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (coin.flip()) g.add_edge(a, b);
    return g;
}

UndirectedGraph disjunctive_product(const UndirectedGraph& g1, const UndirectedGraph& g2,
                                    std::int64_t vertex_cap) {
    const std::int64_t n1 = g1.vertex_count(), n2 = g2.vertex_count();
    if (n1 * n2 > vertex_cap)
        throw LimitError("product has " + std::to_string(n1 * n2) + " vertices, cap is " +
                         std::to_string(vertex_cap));
    UndirectedGraph g(static_cast<int>(n1 * n2), vertex_cap);
    auto idx = [n2](int u1, int u2) { return static_cast<int>(u1 * n2 + u2); };
    for (int u1 = 0; u1 < n1; ++u1)
        for (int u2 = 0; u2 < n2; ++u2)
            for (int v1 = u1; v1 < n1; ++v1) {
                const int v2_start = (v1 == u1) ? u2 + 1 : 0;
                for (int v2 = v2_start; v2 < n2; ++v2)
                    if (g1.adjacent(u1, v1) || g2.adjacent(u2, v2))
                        g.add_edge(idx(u1, u2), idx(v1, v2));
            }
    return g;
}

UndirectedGraph complete_graph(int n) {
    UndirectedGraph g(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) g.add_edge(a, b);
    return g;
}

UndirectedGraph cycle_graph(int n) {
    if (n < 3) throw InvalidInput("cycle needs at least 3 vertices");
    UndirectedGraph g(n);
    for (int a = 0; a < n; ++a) g.add_edge(a, (a + 1) % n);
    return g;
}

UndirectedGraph edgeless_graph(int n) { return UndirectedGraph(n); }

SideInformationGraph bidirected_cycle(int n) {
    if (n < 3) throw InvalidInput("cycle needs at least 3 nodes");
    SideInformationGraph g(n);
    for (int a = 0; a < n; ++a) {
        g.add_edge(a, (a + 1) % n);
        g.add_edge((a + 1) % n, a);
    }
    return g;
}

SideInformationGraph complete_bidirected(int n) {
    SideInformationGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) g.add_edge(i, j);
    return g;
}

}  // namespace confdual
