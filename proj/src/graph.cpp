#include "graphstein/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "graphstein/mathutil.hpp"

namespace graphstein {

Graph::Graph(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("Graph: n must be >= 1");
    words_ = (n + 63) / 64;
    bits_.assign(static_cast<size_t>(n_) * words_, 0);
}

void Graph::add_edge(int i, int j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::invalid_argument("add_edge: vertex out of range");
    if (i == j) throw std::invalid_argument("add_edge: self-loop");
    row_mut(i)[static_cast<size_t>(j) >> 6] |= uint64_t(1) << (j & 63);
    row_mut(j)[static_cast<size_t>(i) >> 6] |= uint64_t(1) << (i & 63);
}

int Graph::degree(int i) const {
    const uint64_t* r = row(i);
    int d = 0;
    for (int w = 0; w < words_; ++w) d += std::popcount(r[w]);
    return d;
}

int pattern_vertices(Pattern f) {
    switch (f) {
        case Pattern::k2: return 2;
        case Pattern::k3: return 3;
        case Pattern::c4: return 4;
    }
    throw std::logic_error("pattern_vertices");
}

int pattern_edges(Pattern f) {
    switch (f) {
        case Pattern::k2: return 1;
        case Pattern::k3: return 3;
        case Pattern::c4: return 4;
    }
    throw std::logic_error("pattern_edges");
}

int pattern_automorphisms(Pattern f) {
    switch (f) {
        case Pattern::k2: return 2;
        case Pattern::k3: return 6;
        case Pattern::c4: return 8;
    }
    throw std::logic_error("pattern_automorphisms");
}

Graph gen_gnp(int n, double p, RngStream& rng) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) throw std::invalid_argument("gen_gnp: p outside [0,1]");
    Graph g(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.next_double() < p) g.add_edge(i, j);
        }
    }
    return g;
}

Graph gen_gnp(int n, double p, uint64_t seed) {
    RngStream rng(seed);
    return gen_gnp(n, p, rng);
}

Graph graph_from_pair_mask(int n, uint64_t mask) {
    if (n < 1 || static_cast<int64_t>(n) * (n - 1) / 2 > 64)
        throw std::invalid_argument("graph_from_pair_mask: n out of range");
    Graph g(n);
    int bit = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++bit)
            if ((mask >> bit) & 1u) g.add_edge(i, j);
    return g;
}

int64_t count_edges(const Graph& g) {
    int64_t twice = 0;
    const int words = g.words_per_row();
    for (int i = 0; i < g.n(); ++i) {
        const uint64_t* r = g.row(i);
        for (int w = 0; w < words; ++w) twice += std::popcount(r[w]);
    }
    return twice / 2;
}

int64_t count_triangles(const Graph& g) {
    // Each triangle is counted once per edge via the codegree of the edge.
    const int n = g.n();
    const int words = g.words_per_row();
    int64_t three_times = 0;
    for (int i = 0; i < n; ++i) {
        const uint64_t* ri = g.row(i);
        for (int j = i + 1; j < n; ++j) {
            if (!g.has_edge(i, j)) continue;
            const uint64_t* rj = g.row(j);
            int c = 0;
            for (int w = 0; w < words; ++w) c += std::popcount(ri[w] & rj[w]);
            three_times += c;
        }
    }
    return three_times / 3;
}

int64_t count_four_cycles(const Graph& g) {
    // codegree route: every 4-cycle on {i,k,j,l} has exactly two diagonal
    // pairs ({i,j} and {k,l}), so summing (c_ij choose 2) over unordered pairs
    // counts each cycle twice. Cross-checked against brute_force_count in the
    // test suite.
    const int n = g.n();
    const int words = g.words_per_row();
    int64_t twice = 0;
    for (int i = 0; i < n; ++i) {
        const uint64_t* ri = g.row(i);
        for (int j = i + 1; j < n; ++j) {
            const uint64_t* rj = g.row(j);
            int64_t c = 0;
            for (int w = 0; w < words; ++w) c += std::popcount(ri[w] & rj[w]);
            twice += c * (c - 1) / 2;
        }
    }
    return twice / 2;
}

namespace {

struct PatternEdges {
    int k;
    std::vector<std::pair<int, int>> edges;
};

PatternEdges pattern_edge_list(Pattern f) {
    switch (f) {
        case Pattern::k2: return {2, {{0, 1}}};
        case Pattern::k3: return {3, {{0, 1}, {0, 2}, {1, 2}}};
        case Pattern::c4: return {4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}};
    }
    throw std::logic_error("pattern_edge_list");
}

// Number of injective adjacency-preserving maps of f into g.
int64_t injective_map_count(const Graph& g, Pattern f) {
    const PatternEdges pat = pattern_edge_list(f);
    const int n = g.n();
    std::vector<int> v(static_cast<size_t>(pat.k), -1);
    int64_t count = 0;
    // Depth-first over ordered injective tuples, pruning on pattern edges.
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == pat.k) {
            ++count;
            return;
        }
        for (int cand = 0; cand < n; ++cand) {
            bool ok = true;
            for (int d = 0; d < depth && ok; ++d)
                if (v[static_cast<size_t>(d)] == cand) ok = false;
            if (!ok) continue;
            for (const auto& [a, b] : pat.edges) {
                if (a < depth && b == depth && !g.has_edge(v[static_cast<size_t>(a)], cand)) ok = false;
                if (b < depth && a == depth && !g.has_edge(v[static_cast<size_t>(b)], cand)) ok = false;
                if (!ok) break;
            }
            if (!ok) continue;
            v[static_cast<size_t>(depth)] = cand;
            self(self, depth + 1);
            v[static_cast<size_t>(depth)] = -1;
        }
    };
    rec(rec, 0);
    return count;
}

}  // namespace

int64_t brute_force_count(const Graph& g, Pattern f) {
    if (g.n() > 14) throw std::invalid_argument("brute_force_count: n > 14");
    return injective_map_count(g, f) / pattern_automorphisms(f);
}

double injective_density(const Graph& g, Pattern f) {
    const int k = pattern_vertices(f);
    if (g.n() < k) throw std::invalid_argument("injective_density: graph smaller than pattern");
    int64_t count = 0;
    switch (f) {
        case Pattern::k2: count = count_edges(g); break;
        case Pattern::k3: count = count_triangles(g); break;
        case Pattern::c4: count = count_four_cycles(g); break;
    }
    const double maps = static_cast<double>(count) * pattern_automorphisms(f);
    return maps / static_cast<double>(falling_factorial(g.n(), k));
}

Graph read_edge_list(std::istream& in) {
    std::string line;
    int line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") != std::string::npos) return true;
        }
        return false;
    };

    if (!next_line()) throw std::runtime_error("edge list: empty input");
    std::istringstream header(line);
    long long n = 0, m = 0;
    if (!(header >> n >> m) || n < 1 || m < 0)
        throw std::runtime_error("edge list: bad header at line " + std::to_string(line_no));

    Graph g(static_cast<int>(n));
    for (long long e = 0; e < m; ++e) {
        if (!next_line())
            throw std::runtime_error("edge list: expected " + std::to_string(m) + " edges, got " +
                                     std::to_string(e));
        std::istringstream row(line);
        long long i = 0, j = 0;
        if (!(row >> i >> j))
            throw std::runtime_error("edge list: bad edge at line " + std::to_string(line_no));
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::runtime_error("edge list: vertex out of range at line " + std::to_string(line_no));
        if (i == j) throw std::runtime_error("edge list: self-loop at line " + std::to_string(line_no));
        if (g.has_edge(static_cast<int>(i), static_cast<int>(j)))
            throw std::runtime_error("edge list: duplicate edge at line " + std::to_string(line_no));
        g.add_edge(static_cast<int>(i), static_cast<int>(j));
    }
    return g;
}

void write_edge_list(const Graph& g, std::ostream& out) {
    const int n = g.n();
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g.has_edge(i, j)) edges.emplace_back(i, j);
    out << n << ' ' << edges.size() << '\n';
    for (const auto& [i, j] : edges) out << i << ' ' << j << '\n';
}

}  // namespace graphstein
