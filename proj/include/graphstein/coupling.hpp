#ifndef GRAPHSTEIN_COUPLING_HPP
#define GRAPHSTEIN_COUPLING_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "graphstein/rng.hpp"

namespace graphstein {

using Vec = std::vector<double>;

// One draw of a coupling triple (W, W', G).
struct CouplingSample {
    Vec w, w_prime, g;
};

struct WeightedSample {
    double prob = 0;
    CouplingSample s;
};

// Exact conditional moments given one "outer" state (the whole graph, the
// whole permutation, ...), with the inner randomness (typically the index
// draw) averaged out analytically. The outer state generates a sigma-field
// containing sigma(W), which is what the variance-of-conditional-expectation
// terms below require.
struct ConditionalMoments {
    int d = 0;
    std::vector<double> gd;       // d*d row-major: E[G_i D_j | state]
    std::vector<double> gdd;      // d*d*d: E[G_i D_j D_k | state]
    Vec d2_each;                  // E[D_i^2 | state]
    double d2 = 0;                // E[|D|^2 | state]
    double sup_g = 0, sup_d = 0;  // maxima of |G|, |D| within the state
};

struct CouplingModel {
    int d = 0;
    std::string name;
    // Equal-marginal lambda variant (pair with matching marginals and linear
    // drift, no exchangeability): only drift and moment relations are
    // claimed, so non-linear test functions are skipped by verify_identity.
    bool equal_marginal = false;
    std::function<CouplingSample(RngStream&)> sampler;
    std::vector<WeightedSample> exact;                          // empty if not enumerable
    std::function<ConditionalMoments(RngStream&)> conditioner;  // may be null

    bool has_exact() const { return !exact.empty(); }
    bool has_conditioner() const { return static_cast<bool>(conditioner); }
};

// ---- constructions ---------------------------------------------------------

// Sum of locally dependent vectors: W = sum X_i, W' = W - sum_{j in A_I} X_j,
// G = -N X_I with I uniform over the index set of size N. The caller declares
// that X_i is independent of (X_j)_{j not in A_i}.
struct LocalDependence {
    int d = 0;
    std::vector<std::vector<int>> neighborhoods;  // A_i as index lists
    // finite joint law: (probability, X values per index); enables the exact
    // enumerator and an exact conditioner
    std::vector<std::pair<double, std::vector<Vec>>> outcomes;
    // sampling law used when `outcomes` is empty
    std::function<std::vector<Vec>(RngStream&)> draw;
};

CouplingModel from_local_dependence(const LocalDependence& spec);

// Joint law of a pair (W, W').
struct PairLaw {
    int d = 0;
    std::vector<std::tuple<double, Vec, Vec>> outcomes;  // finite case
    std::function<std::pair<Vec, Vec>(RngStream&)> draw;
};

// Exchangeable pair with drift E^W(W'-W) = -Lambda W: G = (1/2) Lambda^-1 D.
// The drift condition is validated by enumeration when the law is finite.
CouplingModel from_exchangeable_pair(const PairLaw& pair, const std::vector<double>& lambda_rowmajor);

// Equal-marginal scalar-lambda pair (no exchangeability assumed):
// G = D / (2 lambda). Marginals and drift are validated when enumerable; the
// resulting model is flagged so that only linear checks are asserted.
CouplingModel from_equal_marginal_lambda(const PairLaw& pair, double lambda);

// Size biasing of a nonnegative vector Y with mean mu:
// (W, W', G) = (Y - mu, Y^K - mu, d mu_K e_K), K uniform on the d directions.
// The factor d undoes the uniform direction draw, exactly like the -N X_I
// factor of the local-dependence construction; without it the defining
// identity fails for d >= 2 (verified by enumeration in the tests).
// For a finite pmf the direction-i biased law pmf(y) y_i / mu_i is built
// internally.
struct SizeBiasLaw {
    int d = 0;
    std::vector<std::pair<double, Vec>> pmf;  // finite support of Y
};

CouplingModel from_size_bias(const SizeBiasLaw& law);
CouplingModel from_size_bias(int d, std::function<Vec(RngStream&)> y_sampler,
                             std::vector<std::function<Vec(RngStream&)>> biased_samplers, Vec mu);

// (AW, AW', AG) for an m x d matrix A; closed under the defining identity.
CouplingModel linear_image(const CouplingModel& m, const std::vector<double>& a_rowmajor, int m_rows);

// ---- built-in models -------------------------------------------------------

// The 4-subset decomposition coupling of the graph homogeneity statistics
// under G(n,p), with standardized summands. Exact enumerator for n <= 6;
// sampler and exact-inner conditioner for any n.
CouplingModel graph_coupling_model(int n, double p);

// Fulman cycle-step pair of the standardized (descent, inversion) vector with
// lambda = 2/n; equal-marginal variant. Exact enumerator for n <= 6.
CouplingModel fulman_coupling_model(int n);

// Independent centered coins, A_i = {i}, d = 1, standardized sum.
CouplingModel iid_coins_model(int n_coins, double p);

// Uniform sign vector, one uniformly chosen coordinate refreshed;
// exchangeable with Lambda = (1/n) I, d = 1.
CouplingModel sign_refresh_pair_model(int n_signs);

// W = +/-1 fair, W' = -W; exchangeable with Lambda = 2 I (the drift of this
// pair is E^W(W'-W) = -2W), hence G = -W/2.
CouplingModel flip_sign_model();

// Size-biased Bernoulli(p), d = 1.
CouplingModel size_bias_bernoulli_model(double p);

// Y = (B1+B2, B2+B3) for independent fair coins, d = 2.
CouplingModel size_bias_overlap_model();

// ---- verification ----------------------------------------------------------

enum class VerifyMode { exact, monte_carlo };

struct FunctionCheck {
    std::string function;
    double lhs_prime = 0;  // E G^t F(W')
    double lhs = 0;        // E G^t F(W)
    double rhs = 0;        // E W^t F(W)
    double residual = 0;
    double scale = 1;
    double std_error = 0;  // mc mode only
    bool pass = false;
    bool skipped = false;
};

struct VerifyReport {
    std::string model;
    std::string mode;
    int reps = 0;
    uint64_t seed = 0;
    bool all_pass = true;
    std::vector<FunctionCheck> checks;
};

// Tests the defining identity E[G^t F(W') - G^t F(W)] = E[W^t F(W)] over a
// fixed family: coordinate projections, all monomials w_j e_i, bounded-smooth
// maps tanh(w_j) e_i, and one cubic with pinned pseudo-random coefficients.
// Exact mode needs the enumerator and asserts |residual| <= 1e-10 * scale;
// Monte Carlo mode reports mean residuals with standard errors and passes at
// 4 standard errors.
VerifyReport verify_identity(const CouplingModel& m, VerifyMode mode, int reps = 0, uint64_t seed = 0);

// ---- error-bound ingredients ------------------------------------------------

struct BoundTerms {
    double alpha_sup = 0;  // max |G| observed (exact sup for enumerable states)
    double beta_sup = 0;   // max |D| observed
    double e_d2 = 0;       // E|D|^2
    double b1 = 0;         // sqrt(Var E^F |D|^2)
    double b2 = 0;         // sum_ij sqrt(Var E^F (G_i D_j))
    double b3 = 0;         // sum_ijk sqrt(Var E^F (G_i D_j D_k))
    double b4 = 0;         // sum_i sqrt(Var E^F D_i^2)
    double e_d2_se = 0, b1_se = 0, b2_se = 0, b3_se = 0, b4_se = 0;  // jackknife
    int reps = 0;
};

// Monte Carlo over conditioning states; requires the model's conditioner.
// alpha_sup / beta_sup are maxima of the visited states, i.e. lower bounds on
// the true suprema unless the state space was enumerated.
BoundTerms bound_terms(const CouplingModel& m, int reps, uint64_t seed, int jobs = 0);

// d^{7/4} a E|D|^2 + d^{1/4} b + d^{7/8} a^{1/2} B1^{1/2} + d^{3/8} B2
// + d^{1/8} B3^{1/2}  (the standardized-covariance bracket, constant omitted).
double bound_evaluate(int d, const BoundTerms& t);

// Bracket in terms of operator/sup norms s2, s_inf of the inverse covariance
// square root: a s2^2 E|D|^2 + s2 b + s_inf a^{1/2} B4^{1/2} + s_inf^2 B2
// + s_inf^{3/2} B3^{1/2}.
double bound_evaluate_sigma(const BoundTerms& t, double s2, double s_inf);

}  // namespace graphstein

#endif
