#ifndef GRAPHSTEIN_MONTECARLO_HPP
#define GRAPHSTEIN_MONTECARLO_HPP

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "graphstein/graphon.hpp"
#include "graphstein/rng.hpp"

namespace graphstein {

// Runs body(rep, rng) for rep = 0..reps-1 on `jobs` threads (0 = hardware
// count). Each replication gets its own stream RngStream(seed, rep) and a
// dedicated output slot, so results are identical for any worker count.
template <class Body>
void replicate(int reps, int jobs, uint64_t seed, Body&& body) {
    int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, reps));
    if (workers == 1) {
        for (int r = 0; r < reps; ++r) {
            RngStream rng(seed, static_cast<uint64_t>(r));
            body(r, rng);
        }
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const int r = next.fetch_add(1);
                if (r >= reps) return;
                RngStream rng(seed, static_cast<uint64_t>(r));
                body(r, rng);
            }
        });
    for (auto& th : pool) th.join();
}

// Binomial frequency with a 3-sigma half width.
struct FrequencyResult {
    double freq = 0;
    double ci_half = 0;
    int hits = 0;
    int reps = 0;
};

// Fraction of replications of G(n,p) whose confidence set misses the true p.
FrequencyResult coverage_experiment(int n, double p, double alpha, int reps, uint64_t seed,
                                    int jobs = 0);

// Fraction of replications of G(n,kernel) with an empty confidence set.
FrequencyResult power_experiment(int n, const GraphonKernel& kernel, double alpha, int reps,
                                 uint64_t seed, int jobs = 0);

// (W1, W2) samples of the graph statistics at the true p.
std::vector<std::array<double, 2>> sample_graph_w(int n, double p, int reps, uint64_t seed,
                                                  int jobs = 0);
// Standardized (descent, inversion) samples.
std::vector<std::array<double, 2>> sample_perm_w(int n, int reps, uint64_t seed, int jobs = 0);

// Kolmogorov distance between the empirical law of the samples and a
// reference CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

// Largest discrepancy to the standard bivariate Gaussian over a declared
// finite family of convex sets: 64 half-space directions x 41 offsets,
// 41 centered balls, and a 20 x 20 grid of lower-left quadrants. A lower
// bound for the full convex-set distance by construction.
struct DistanceReport {
    std::array<double, 2> ks_marginals{};  // per-coordinate KS vs N(0,1)
    double chi2_ks = 0;                    // KS of |W|^2 vs chi-squared(2)
    double convex_proxy = 0;
};

DistanceReport gaussian_distance_report(const std::vector<std::array<double, 2>>& samples);

// Least-squares fit of log(distance) against log(n).
struct RateFit {
    double slope = 0;
    double intercept = 0;
    std::vector<double> residuals;
};

RateFit rate_fit(const std::vector<double>& n_values, const std::vector<double>& distances);

// ---- experiment harness ------------------------------------------------------

struct ExperimentConfig {
    enum class Kind { coverage, power, distance, rate };
    Kind kind = Kind::coverage;
    std::string target = "graph";  // "graph" or "perm" for distance/rate
    std::vector<int> n_list;       // rate uses all entries, others the first
    double p = 0.5;
    std::optional<GraphonKernel> kernel;  // power (and graph gen when set)
    double alpha = 0.05;
    int reps = 1000;
    uint64_t seed = 0;
    int jobs = 0;
};

struct ExperimentResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // one row per replication (per n for rate)
    // summary statistics, experiment dependent
    std::vector<std::pair<std::string, double>> summary;
};

ExperimentResult run_replications(const ExperimentConfig& cfg);

}  // namespace graphstein

#endif
