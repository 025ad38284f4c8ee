#ifndef GRAPHSTEIN_HOMOGENEITY_HPP
#define GRAPHSTEIN_HOMOGENEITY_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "graphstein/graph.hpp"

namespace graphstein {

// Exact variance of the edge count T1 under G(n,p): C(n,2) p (1-p).
double sigma1_sq(int n, double p);

// Exact variance of the corrected 4-cycle statistic
//   T2 - 2 C(n-2,2) p^3 T1 + 9 C(n,4) p^4
// under G(n,p). Evaluated through two independent algebraic routes which must
// agree to 1e-9 relative (internal consistency error otherwise); the second,
// expanded route is returned. Requires n >= 5.
double sigma2_sq(int n, double p);

struct TestStatistics {
    double w1 = 0;  // normalized edge count
    double w2 = 0;  // corrected, normalized 4-cycle count
    int64_t t1 = 0;
    int64_t t2 = 0;
    double p = 0;
    int n = 0;
    double sigma1_sq = 0;
    double sigma2_sq = 0;
};

TestStatistics w_stats(const Graph& g, double p);
// Same, from precomputed counts (the per-p paths of the confidence set reuse
// one pair of counts).
TestStatistics w_stats_from_counts(int n, int64_t t1, int64_t t2, double p);

// W1^2 + W2^2 at a given p.
double homogeneity_statistic(int n, int64_t t1, int64_t t2, double p);

// 1-alpha quantile of the chi-squared distribution with 2 df: -2 ln(alpha).
double chi2_quantile(double alpha);

struct ConfidenceSet {
    double alpha = 0;
    double p_lo = 0, p_hi = 0;
    double grid_step = 0;
    std::vector<std::array<double, 2>> intervals;  // disjoint, ascending
    double statistic_min = 0;
    double argmin_p = 0;

    bool empty() const { return intervals.empty(); }
    bool contains(double p) const;
};

// Sublevel set {p in [p_lo,p_hi] : W1^2 + W2^2 <= q_{1-alpha}} located on a
// grid and refined by bisection to 1e-8 in p. An interval narrower than two
// grid steps can in principle be missed between grid points; see README.
ConfidenceSet confidence_set(const Graph& g, double alpha, double p_lo = 0.01, double p_hi = 0.99,
                             double grid_step = 1e-3);
ConfidenceSet confidence_set_from_counts(int n, int64_t t1, int64_t t2, double alpha,
                                         double p_lo = 0.01, double p_hi = 0.99,
                                         double grid_step = 1e-3);

struct TestDecision {
    bool reject = false;
    double inf_stat = 0;
    double argmin_p = 0;
};

// Conservative homogeneity test: reject iff the confidence set is empty.
TestDecision homogeneity_test(const Graph& g, double alpha, double p_lo = 0.01, double p_hi = 0.99,
                              double grid_step = 1e-3);

// Centered 4-cycle kernel of the tuple (i,j,k,l), i<j<k<l:
//   I_ij I_jk I_kl I_il - p^3 (I_ij + I_jk + I_kl + I_il) + 3 p^4.
double eta_value(const Graph& g, int i, int j, int k, int l, double p);

// Local decomposition of the statistics over 4-subsets (lexicographic order):
//   X1 = (sum of the six pair indicators) - 6p
//   X2 = eta(i,j,k,l) + eta(i,j,l,k) + eta(i,k,j,l)
// Summed with weights 1/(C(n-2,2) sigma1) and 1/sigma2 these reproduce
// (W1, W2) exactly.
struct Decomposition {
    std::vector<std::array<int, 4>> tuples;
    std::vector<double> x1;
    std::vector<double> x2;
};

Decomposition decomposition_components(const Graph& g, double p);

}  // namespace graphstein

#endif
