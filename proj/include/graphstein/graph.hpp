#ifndef GRAPHSTEIN_GRAPH_HPP
#define GRAPHSTEIN_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "graphstein/rng.hpp"

namespace graphstein {

// Simple undirected graph on n labeled vertices with dense bit-row adjacency
// (one 64-bit word per 64 vertices). Symmetry and an empty diagonal are
// maintained by construction; all counting routines are read-only and safe to
// call concurrently.
class Graph {
  public:
    explicit Graph(int n);

    int n() const { return n_; }
    int words_per_row() const { return words_; }

    bool has_edge(int i, int j) const {
        return (row(i)[static_cast<size_t>(j) >> 6] >> (j & 63)) & 1u;
    }

    // Sets both directions; rejects loops and out-of-range vertices.
    void add_edge(int i, int j);

    const uint64_t* row(int i) const { return bits_.data() + static_cast<size_t>(i) * words_; }

    int degree(int i) const;

    bool operator==(const Graph&) const = default;

  private:
    uint64_t* row_mut(int i) { return bits_.data() + static_cast<size_t>(i) * words_; }

    int n_;
    int words_;
    std::vector<uint64_t> bits_;
};

enum class Pattern { k2, k3, c4 };

int pattern_vertices(Pattern f);
int pattern_edges(Pattern f);
int pattern_automorphisms(Pattern f);  // k2: 2, k3: 6, c4: 8

// G(n,p): every unordered pair is an edge independently with probability p.
// Pairs are visited in row-major order (i < j) consuming one uniform each, so
// the output is a pure function of (n, p, seed).
Graph gen_gnp(int n, double p, uint64_t seed);
Graph gen_gnp(int n, double p, RngStream& rng);

// Graph from a bitmask over the C(n,2) pairs in row-major (i<j) order; the
// workhorse of the exhaustive small-n oracles.
Graph graph_from_pair_mask(int n, uint64_t mask);

int64_t count_edges(const Graph& g);     // T1
int64_t count_triangles(const Graph& g);
int64_t count_four_cycles(const Graph& g);  // T2, via codegrees

// Exhaustive enumeration of injective maps; the oracle for the fast counters.
// Guarded to g.n() <= 14.
int64_t brute_force_count(const Graph& g, Pattern f);

// Injective homomorphism density: |injective maps of f into g| / (n)_k.
double injective_density(const Graph& g, Pattern f);

// Text format: first line "n m", then m lines "i j" with 0-based ids.
// The reader rejects self-loops, duplicates and out-of-range ids; the writer
// emits edges sorted lexicographically.
Graph read_edge_list(std::istream& in);
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace graphstein

#endif
