#include "graphstein/homogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "graphstein/mathutil.hpp"

namespace graphstein {

double sigma1_sq(int n, double p) {
    if (n < 2) throw std::invalid_argument("sigma1_sq: n < 2");
    if (std::isnan(p) || p < 0.0 || p > 1.0) throw std::invalid_argument("sigma1_sq: p outside [0,1]");
    return binomial_d(n, 2) * p * (1.0 - p);
}

double sigma2_sq(int n, double p) {
    if (n < 5) throw std::invalid_argument("sigma2_sq: n < 5");
    if (std::isnan(p) || p < 0.0 || p > 1.0) throw std::invalid_argument("sigma2_sq: p outside [0,1]");

    // The polynomial brackets cancel heavily near p = 1, so they are formed in
    // extended precision before the (exact) integer factors are applied.
    const long double q = static_cast<long double>(p);
    const long double q2 = q * q, q3 = q2 * q, q4 = q2 * q2;
    const long double q6 = q3 * q3, q7 = q6 * q, q8 = q4 * q4;

    // route one
    const long double c4 = static_cast<long double>(binomial_d(n, 4));
    const long double bracket1 =
        q4 * (1.0L - 4.0L * q3 + 3.0L * q4) + (4.0L * (n - 4) + 2.0L) * q6 * (1.0L - 2.0L * q + q2);
    const long double form1 = 3.0L * c4 * bracket1;

    // route two (returned)
    const long double n4 = static_cast<long double>(static_cast<double>(falling_factorial(n, 4)));
    const long double form2 =
        n4 * (n - 3) * (q6 + q8 - 2.0L * q7) / 2.0L + n4 * (q4 + q8 - 2.0L * q6) / 8.0L;

    const long double scale = std::max({std::fabs(static_cast<double>(form1)),
                                        std::fabs(static_cast<double>(form2)), 1e-300});
    if (std::fabs(static_cast<double>(form1 - form2)) > 1e-9 * static_cast<double>(scale))
        throw std::logic_error("sigma2_sq: the two closed forms disagree");
    return static_cast<double>(form2);
}

TestStatistics w_stats_from_counts(int n, int64_t t1, int64_t t2, double p) {
    if (n < 5) throw std::invalid_argument("w_stats: n < 5");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("w_stats: degenerate variance at p in {0,1}");

    TestStatistics s;
    s.n = n;
    s.p = p;
    s.t1 = t1;
    s.t2 = t2;
    s.sigma1_sq = sigma1_sq(n, p);
    s.sigma2_sq = sigma2_sq(n, p);

    const double p3 = p * p * p;
    const double p4 = p3 * p;
    s.w1 = (static_cast<double>(t1) - binomial_d(n, 2) * p) / std::sqrt(s.sigma1_sq);
    const double numer = static_cast<double>(t2) - 2.0 * binomial_d(n - 2, 2) * p3 * static_cast<double>(t1) +
                         9.0 * binomial_d(n, 4) * p4;
    s.w2 = numer / std::sqrt(s.sigma2_sq);
    return s;
}

TestStatistics w_stats(const Graph& g, double p) {
    return w_stats_from_counts(g.n(), count_edges(g), count_four_cycles(g), p);
}

double homogeneity_statistic(int n, int64_t t1, int64_t t2, double p) {
    const TestStatistics s = w_stats_from_counts(n, t1, t2, p);
    return s.w1 * s.w1 + s.w2 * s.w2;
}

double chi2_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("chi2_quantile: alpha outside (0,1]");
    return -2.0 * std::log(alpha);
}

bool ConfidenceSet::contains(double p) const {
    for (const auto& iv : intervals)
        if (p >= iv[0] && p <= iv[1]) return true;
    return false;
}

ConfidenceSet confidence_set_from_counts(int n, int64_t t1, int64_t t2, double alpha, double p_lo,
                                         double p_hi, double grid_step) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("confidence_set: alpha outside (0,1)");
    if (!(0.0 < p_lo && p_lo < p_hi && p_hi < 1.0))
        throw std::invalid_argument("confidence_set: need 0 < p_lo < p_hi < 1");
    if (!(grid_step > 0.0)) throw std::invalid_argument("confidence_set: grid_step <= 0");

    const double q = chi2_quantile(alpha);
    auto stat = [&](double p) { return homogeneity_statistic(n, t1, t2, p); };

    std::vector<double> grid;
    for (double p = p_lo; p < p_hi; p += grid_step) grid.push_back(p);
    grid.push_back(p_hi);

    ConfidenceSet cs;
    cs.alpha = alpha;
    cs.p_lo = p_lo;
    cs.p_hi = p_hi;
    cs.grid_step = grid_step;

    std::vector<double> vals(grid.size());
    cs.statistic_min = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < grid.size(); ++i) {
        vals[i] = stat(grid[i]);
        if (vals[i] < cs.statistic_min) {
            cs.statistic_min = vals[i];
            cs.argmin_p = grid[i];
        }
    }

    // locate the boundary of {stat <= q} between two grid points
    auto bisect = [&](double a, double b, bool inside_left) {
        for (int it = 0; it < 60 && b - a > 1e-8; ++it) {
            const double mid = 0.5 * (a + b);
            const bool in = stat(mid) <= q;
            if (in == inside_left)
                a = mid;
            else
                b = mid;
        }
        return 0.5 * (a + b);
    };

    bool open = false;
    double start = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        const bool in = vals[i] <= q;
        if (in && !open) {
            start = i == 0 ? grid[0] : bisect(grid[i - 1], grid[i], false);
            open = true;
        } else if (!in && open) {
            cs.intervals.push_back({start, bisect(grid[i - 1], grid[i], true)});
            open = false;
        }
    }
    if (open) cs.intervals.push_back({start, grid.back()});
    return cs;
}

ConfidenceSet confidence_set(const Graph& g, double alpha, double p_lo, double p_hi, double grid_step) {
    return confidence_set_from_counts(g.n(), count_edges(g), count_four_cycles(g), alpha, p_lo, p_hi,
                                      grid_step);
}

TestDecision homogeneity_test(const Graph& g, double alpha, double p_lo, double p_hi, double grid_step) {
    const ConfidenceSet cs = confidence_set(g, alpha, p_lo, p_hi, grid_step);
    return {cs.empty(), cs.statistic_min, cs.argmin_p};
}

namespace {

// eta over an explicitly ordered 4-cycle a-b-c-d-a (no ordering requirement).
inline double eta_cycle(const Graph& g, int a, int b, int c, int d, double p) {
    const double i1 = g.has_edge(a, b) ? 1.0 : 0.0;
    const double i2 = g.has_edge(b, c) ? 1.0 : 0.0;
    const double i3 = g.has_edge(c, d) ? 1.0 : 0.0;
    const double i4 = g.has_edge(a, d) ? 1.0 : 0.0;
    const double p3 = p * p * p;
    return i1 * i2 * i3 * i4 - p3 * (i1 + i2 + i3 + i4) + 3.0 * p3 * p;
}

}  // namespace

double eta_value(const Graph& g, int i, int j, int k, int l, double p) {
    if (!(i < j && j < k && k < l)) throw std::invalid_argument("eta_value: tuple must satisfy i<j<k<l");
    if (i < 0 || l >= g.n()) throw std::invalid_argument("eta_value: vertex out of range");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("eta_value: p outside (0,1)");
    return eta_cycle(g, i, j, k, l, p);
}

Decomposition decomposition_components(const Graph& g, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("decomposition_components: p outside (0,1)");
    const int n = g.n();
    Decomposition d;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    d.tuples.push_back({i, j, k, l});
                    const double e6 = (g.has_edge(i, j) ? 1 : 0) + (g.has_edge(i, k) ? 1 : 0) +
                                      (g.has_edge(i, l) ? 1 : 0) + (g.has_edge(j, k) ? 1 : 0) +
                                      (g.has_edge(j, l) ? 1 : 0) + (g.has_edge(k, l) ? 1 : 0);
                    d.x1.push_back(e6 - 6.0 * p);
                    d.x2.push_back(eta_cycle(g, i, j, k, l, p) + eta_cycle(g, i, j, l, k, p) +
                                   eta_cycle(g, i, k, j, l, p));
                }
    return d;
}

}  // namespace graphstein
