#include "graphstein/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "graphstein/homogeneity.hpp"
#include "graphstein/mathutil.hpp"
#include "graphstein/permstat.hpp"

namespace graphstein {

namespace {

FrequencyResult make_freq(int hits, int reps) {
    FrequencyResult r;
    r.hits = hits;
    r.reps = reps;
    r.freq = static_cast<double>(hits) / reps;
    r.ci_half = 3.0 * std::sqrt(r.freq * (1.0 - r.freq) / reps);
    return r;
}

}  // namespace

FrequencyResult coverage_experiment(int n, double p, double alpha, int reps, uint64_t seed, int jobs) {
    if (reps < 1) throw std::invalid_argument("coverage_experiment: reps < 1");
    std::vector<uint8_t> miss(static_cast<size_t>(reps), 0);
    replicate(reps, jobs, seed, [&](int rep, RngStream& rng) {
        const Graph g = gen_gnp(n, p, rng);
        const ConfidenceSet cs = confidence_set(g, alpha);
        miss[static_cast<size_t>(rep)] = cs.contains(p) ? 0 : 1;
    });
    int misses = 0;
    for (uint8_t m : miss) misses += m;
    return make_freq(misses, reps);
}

FrequencyResult power_experiment(int n, const GraphonKernel& kernel, double alpha, int reps,
                                 uint64_t seed, int jobs) {
    if (reps < 1) throw std::invalid_argument("power_experiment: reps < 1");
    std::vector<uint8_t> rejected(static_cast<size_t>(reps), 0);
    replicate(reps, jobs, seed, [&](int rep, RngStream& rng) {
        // gen_graphon consumes a fresh stream derived from this rep's stream
        const Graph g = gen_graphon(n, kernel, rng.next_u64());
        const ConfidenceSet cs = confidence_set(g, alpha);
        rejected[static_cast<size_t>(rep)] = cs.empty() ? 1 : 0;
    });
    int rejects = 0;
    for (uint8_t r : rejected) rejects += r;
    return make_freq(rejects, reps);
}

std::vector<std::array<double, 2>> sample_graph_w(int n, double p, int reps, uint64_t seed, int jobs) {
    std::vector<std::array<double, 2>> out(static_cast<size_t>(reps));
    replicate(reps, jobs, seed, [&](int rep, RngStream& rng) {
        const Graph g = gen_gnp(n, p, rng);
        const TestStatistics s = w_stats(g, p);
        out[static_cast<size_t>(rep)] = {s.w1, s.w2};
    });
    return out;
}

std::vector<std::array<double, 2>> sample_perm_w(int n, int reps, uint64_t seed, int jobs) {
    std::vector<std::array<double, 2>> out(static_cast<size_t>(reps));
    replicate(reps, jobs, seed, [&](int rep, RngStream& rng) {
        const Permutation pi = Permutation::uniform(n, rng);
        const auto [w1, w2] = standardized_descent_inversion(pi);
        out[static_cast<size_t>(rep)] = {w1, w2};
    });
    return out;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double worst = 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        worst = std::max(worst, std::max(f - static_cast<double>(i) / n,
                                         static_cast<double>(i + 1) / n - f));
    }
    return worst;
}

DistanceReport gaussian_distance_report(const std::vector<std::array<double, 2>>& samples) {
    if (samples.empty()) throw std::invalid_argument("gaussian_distance_report: no samples");
    DistanceReport rep;
    const double n = static_cast<double>(samples.size());

    for (int c = 0; c < 2; ++c) {
        std::vector<double> xs(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) xs[i] = samples[i][static_cast<size_t>(c)];
        rep.ks_marginals[static_cast<size_t>(c)] = ks_distance(std::move(xs), normal_cdf);
    }
    {
        std::vector<double> r2(samples.size());
        for (size_t i = 0; i < samples.size(); ++i)
            r2[i] = samples[i][0] * samples[i][0] + samples[i][1] * samples[i][1];
        rep.chi2_ks = ks_distance(std::move(r2), chi2_cdf_df2);
    }

    double worst = 0;
    // half-spaces: u . x <= t, P = Phi(t)
    constexpr int kDirections = 64, kOffsets = 41;
    std::vector<double> proj(samples.size());
    for (int k = 0; k < kDirections; ++k) {
        const double a = 2.0 * M_PI * k / kDirections;
        const double ux = std::cos(a), uy = std::sin(a);
        for (size_t i = 0; i < samples.size(); ++i) proj[i] = ux * samples[i][0] + uy * samples[i][1];
        std::sort(proj.begin(), proj.end());
        for (int j = 0; j < kOffsets; ++j) {
            const double t = -3.0 + 6.0 * j / (kOffsets - 1);
            const auto count = std::upper_bound(proj.begin(), proj.end(), t) - proj.begin();
            worst = std::max(worst, std::fabs(static_cast<double>(count) / n - normal_cdf(t)));
        }
    }
    // centered balls: |x| <= r, P = 1 - exp(-r^2/2)
    {
        std::vector<double> norms(samples.size());
        for (size_t i = 0; i < samples.size(); ++i)
            norms[i] = std::hypot(samples[i][0], samples[i][1]);
        std::sort(norms.begin(), norms.end());
        for (int j = 1; j <= 41; ++j) {
            const double r = 0.1 * j;
            const auto count = std::upper_bound(norms.begin(), norms.end(), r) - norms.begin();
            worst = std::max(worst, std::fabs(static_cast<double>(count) / n - (1.0 - std::exp(-0.5 * r * r))));
        }
    }
    // lower-left quadrants (-inf,a] x (-inf,b], P = Phi(a) Phi(b)
    {
        constexpr int kGrid = 20;
        for (int ia = 0; ia < kGrid; ++ia) {
            const double a = -2.85 + 5.7 * ia / (kGrid - 1);
            for (int ib = 0; ib < kGrid; ++ib) {
                const double b = -2.85 + 5.7 * ib / (kGrid - 1);
                int64_t count = 0;
                for (const auto& s : samples) count += (s[0] <= a && s[1] <= b) ? 1 : 0;
                worst = std::max(worst, std::fabs(static_cast<double>(count) / n -
                                                  normal_cdf(a) * normal_cdf(b)));
            }
        }
    }
    rep.convex_proxy = worst;
    return rep;
}

RateFit rate_fit(const std::vector<double>& n_values, const std::vector<double>& distances) {
    if (n_values.size() != distances.size() || n_values.size() < 2)
        throw std::invalid_argument("rate_fit: need >= 2 matching points");
    const size_t m = n_values.size();
    std::vector<double> lx(m), ly(m);
    for (size_t i = 0; i < m; ++i) {
        if (!(n_values[i] > 0) || !(distances[i] > 0))
            throw std::invalid_argument("rate_fit: values must be positive");
        lx[i] = std::log(n_values[i]);
        ly[i] = std::log(distances[i]);
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.residuals.resize(m);
    for (size_t i = 0; i < m; ++i) fit.residuals[i] = ly[i] - (fit.intercept + fit.slope * lx[i]);
    return fit;
}

ExperimentResult run_replications(const ExperimentConfig& cfg) {
    if (cfg.reps < 1) throw std::invalid_argument("run_replications: reps < 1");
    if (cfg.n_list.empty()) throw std::invalid_argument("run_replications: empty n list");
    const int n0 = cfg.n_list.front();
    const bool graph_target = cfg.target != "perm";
    if (graph_target)
        for (int n : cfg.n_list)
            if (n < 5) throw std::invalid_argument("run_replications: graph experiments need n >= 5");

    ExperimentResult res;
    using Kind = ExperimentConfig::Kind;
    switch (cfg.kind) {
        case Kind::coverage: {
            res.columns = {"rep", "w1", "w2", "stat_true_p", "covered"};
            res.rows.assign(static_cast<size_t>(cfg.reps), {});
            replicate(cfg.reps, cfg.jobs, cfg.seed, [&](int rep, RngStream& rng) {
                const Graph g = gen_gnp(n0, cfg.p, rng);
                const TestStatistics s = w_stats(g, cfg.p);
                const ConfidenceSet cs = confidence_set(g, cfg.alpha);
                res.rows[static_cast<size_t>(rep)] = {static_cast<double>(rep), s.w1, s.w2,
                                                      s.w1 * s.w1 + s.w2 * s.w2,
                                                      cs.contains(cfg.p) ? 1.0 : 0.0};
            });
            int misses = 0;
            for (const auto& row : res.rows) misses += row[4] == 0.0 ? 1 : 0;
            const FrequencyResult fr = make_freq(misses, cfg.reps);
            res.summary = {{"non_coverage", fr.freq}, {"ci_half_width", fr.ci_half}};
            break;
        }
        case Kind::power: {
            if (!cfg.kernel) throw std::invalid_argument("power experiment needs a kernel");
            res.columns = {"rep", "statistic_min", "argmin_p", "empty"};
            res.rows.assign(static_cast<size_t>(cfg.reps), {});
            replicate(cfg.reps, cfg.jobs, cfg.seed, [&](int rep, RngStream& rng) {
                const Graph g = gen_graphon(n0, *cfg.kernel, rng.next_u64());
                const ConfidenceSet cs = confidence_set(g, cfg.alpha);
                res.rows[static_cast<size_t>(rep)] = {static_cast<double>(rep), cs.statistic_min,
                                                      cs.argmin_p, cs.empty() ? 1.0 : 0.0};
            });
            int rejects = 0;
            for (const auto& row : res.rows) rejects += row[3] == 1.0 ? 1 : 0;
            const FrequencyResult fr = make_freq(rejects, cfg.reps);
            res.summary = {{"reject_frequency", fr.freq}, {"ci_half_width", fr.ci_half}};
            break;
        }
        case Kind::distance: {
            res.columns = {"rep", "w1", "w2"};
            const auto samples = graph_target ? sample_graph_w(n0, cfg.p, cfg.reps, cfg.seed, cfg.jobs)
                                              : sample_perm_w(n0, cfg.reps, cfg.seed, cfg.jobs);
            res.rows.assign(static_cast<size_t>(cfg.reps), {});
            for (int r = 0; r < cfg.reps; ++r)
                res.rows[static_cast<size_t>(r)] = {static_cast<double>(r), samples[static_cast<size_t>(r)][0],
                                                    samples[static_cast<size_t>(r)][1]};
            const DistanceReport dr = gaussian_distance_report(samples);
            res.summary = {{"ks_w1", dr.ks_marginals[0]},
                           {"ks_w2", dr.ks_marginals[1]},
                           {"chi2_ks", dr.chi2_ks},
                           {"convex_proxy", dr.convex_proxy}};
            break;
        }
        case Kind::rate: {
            res.columns = {"n", "ks_w1"};
            std::vector<double> ns, ds;
            for (size_t i = 0; i < cfg.n_list.size(); ++i) {
                const int n = cfg.n_list[i];
                const uint64_t seed_i = cfg.seed + 0x9E3779B97F4A7C15ull * (i + 1);
                const auto samples = graph_target ? sample_graph_w(n, cfg.p, cfg.reps, seed_i, cfg.jobs)
                                                  : sample_perm_w(n, cfg.reps, seed_i, cfg.jobs);
                std::vector<double> w1(samples.size());
                for (size_t s = 0; s < samples.size(); ++s) w1[s] = samples[s][0];
                const double ks = ks_distance(std::move(w1), normal_cdf);
                ns.push_back(n);
                ds.push_back(ks);
                res.rows.push_back({static_cast<double>(n), ks});
            }
            const RateFit fit = rate_fit(ns, ds);
            res.summary = {{"slope", fit.slope}, {"intercept", fit.intercept}};
            break;
        }
    }
    return res;
}

}  // namespace graphstein
