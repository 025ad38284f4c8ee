#ifndef GRAPHSTEIN_MATHUTIL_HPP
#define GRAPHSTEIN_MATHUTIL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace graphstein {

// Falling factorial n(n-1)...(n-k+1) in exact integer arithmetic.
inline __int128 falling_factorial(int64_t n, int k) {
    if (k < 0) throw std::invalid_argument("falling_factorial: k < 0");
    __int128 r = 1;
    for (int i = 0; i < k; ++i) r *= (n - i);
    return r;
}

inline __int128 binomial_i128(int64_t n, int k) {
    if (k < 0 || k > n) return 0;
    __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline int64_t binomial(int64_t n, int k) { return static_cast<int64_t>(binomial_i128(n, k)); }

inline double binomial_d(int64_t n, int k) {
    return static_cast<double>(binomial_i128(n, k));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// CDF of the chi-squared distribution with 2 degrees of freedom.
inline double chi2_cdf_df2(double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-0.5 * x); }

// Regularized lower incomplete gamma P(a, x), series + continued fraction.
double gamma_p(double a, double x);

// Chi-squared CDF and quantile for general (integer or not) df.
inline double chi2_cdf(double x, double df) { return x <= 0 ? 0.0 : gamma_p(0.5 * df, 0.5 * x); }
double chi2_quantile_df(double prob, double df);

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  // unbiased sample variance
    int n = 0;
};

inline MeanVar mean_var(const std::vector<double>& x) {
    MeanVar r;
    r.n = static_cast<int>(x.size());
    if (r.n == 0) return r;
    double s = 0;
    for (double v : x) s += v;
    r.mean = s / r.n;
    if (r.n > 1) {
        double q = 0;
        for (double v : x) q += (v - r.mean) * (v - r.mean);
        r.var = q / (r.n - 1);
    }
    return r;
}

}  // namespace graphstein

#endif
