#include <doctest.h>

#include <cmath>

#include "graphstein/homogeneity.hpp"
#include "graphstein/mathutil.hpp"
#include "graphstein/montecarlo.hpp"
#include "test_util.hpp"

using namespace graphstein;

TEST_CASE("replication engine is deterministic across worker counts") {
    auto run = [](int jobs) {
        std::vector<double> out(50);
        replicate(50, jobs, 777, [&](int rep, RngStream& rng) {
            double s = 0;
            for (int i = 0; i < 20; ++i) s += rng.next_double();
            out[static_cast<size_t>(rep)] = s;
        });
        return out;
    };
    const auto a = run(1);
    const auto b = run(8);
    CHECK(a == b);  // bit-identical
}

TEST_CASE("single replication equals a direct call with stream 0") {
    std::vector<double> row(1);
    replicate(1, 4, 123, [&](int, RngStream& rng) { row[0] = rng.next_double(); });
    RngStream direct(123, 0);
    CHECK(row[0] == direct.next_double());
}

TEST_CASE("ks distance basics") {
    // point mass at zero against the standard normal
    CHECK(ks_distance(std::vector<double>(1000, 0.0), normal_cdf) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(ks_distance({}, normal_cdf), std::invalid_argument);

    // self-distribution draw: DKW bound 0.006 at 1e5 samples holds with
    // probability well above 0.99
    RngStream rng(2718);
    std::vector<double> xs(100000);
    for (double& x : xs) x = rng.normal();
    CHECK(ks_distance(std::move(xs), normal_cdf) <= 0.006);
}

TEST_CASE("rate fit closed forms") {
    std::vector<double> ns = {50, 100, 200, 400};
    std::vector<double> exact(ns.size()), flat(ns.size(), 0.77);
    for (size_t i = 0; i < ns.size(); ++i) exact[i] = 1.0 / std::sqrt(ns[i]);
    const RateFit f = rate_fit(ns, exact);
    CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-12));
    for (double r : f.residuals) CHECK(std::fabs(r) < 1e-12);
    CHECK(rate_fit(ns, flat).slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(rate_fit({10.0}, {0.5}), std::invalid_argument);
}

TEST_CASE("binomial interval construction") {
    const FrequencyResult r = coverage_experiment(60, 0.5, 0.05, 200, 4, 2);
    CHECK(r.reps == 200);
    CHECK(r.freq == doctest::Approx(static_cast<double>(r.hits) / r.reps));
    CHECK(r.ci_half == doctest::Approx(3.0 * std::sqrt(r.freq * (1.0 - r.freq) / r.reps)));
    CHECK(r.freq >= 0.0);
    CHECK(r.freq <= 1.0);
}

TEST_CASE("coverage sanity at moderate size") {
    // quick desk check; the tight 2000-rep version runs in the acceptance suite
    const FrequencyResult r = coverage_experiment(200, 0.5, 0.05, 400, 11, 0);
    CHECK(r.freq > 0.005);
    CHECK(r.freq < 0.13);
}

TEST_CASE("alpha near one forces non-coverage") {
    const FrequencyResult r = coverage_experiment(100, 0.5, 0.999, 200, 5, 0);
    CHECK(r.freq >= 0.99);
}

TEST_CASE("coverage error shrinks with n") {
    // |freq - alpha| averaged over three seeds, n = 50 versus n = 400
    const double alpha = 0.05;
    double err50 = 0, err400 = 0;
    for (uint64_t seed : {1u, 2u, 3u}) {
        err50 += std::fabs(coverage_experiment(50, 0.5, alpha, 1500, seed, 0).freq - alpha);
        err400 += std::fabs(coverage_experiment(400, 0.5, alpha, 1500, seed, 0).freq - alpha);
    }
    CHECK(err400 / 3.0 <= err50 / 3.0 + 0.01);
}

TEST_CASE("power under the null stays near alpha, and grows with n under a block kernel") {
    const GraphonKernel null_kernel = GraphonKernel::constant(0.5);
    const FrequencyResult null_r = power_experiment(150, null_kernel, 0.05, 300, 21, 0);
    CHECK(null_r.freq <= 0.05 + 0.05);  // conservative test: reject rate <= alpha + noise

    const GraphonKernel blocks = GraphonKernel::block_step({0.5}, {{0.7, 0.3}, {0.3, 0.7}});
    double prev = -0.03;
    for (int n : {100, 200, 400}) {
        const FrequencyResult r = power_experiment(n, blocks, 0.05, 100, 31, 0);
        CHECK(r.freq >= prev - 0.05);  // nondecreasing up to binomial noise
        prev = r.freq;
    }
    CHECK(prev >= 0.95);  // at n=400 the test essentially always rejects
}

TEST_CASE("distance report on reference normal samples") {
    RngStream rng(31415);
    std::vector<std::array<double, 2>> samples(60000);
    for (auto& s : samples) s = {rng.normal(), rng.normal()};
    const DistanceReport rep = gaussian_distance_report(samples);
    CHECK(rep.ks_marginals[0] < 0.01);
    CHECK(rep.ks_marginals[1] < 0.01);
    CHECK(rep.chi2_ks < 0.01);
    CHECK(rep.convex_proxy < 0.012);
    CHECK(rep.convex_proxy <= 1.0);

    // the proxy dominates the axis-aligned half-space discrepancy over the
    // declared offset grid by construction
    double axis = 0;
    for (int c = 0; c < 2; ++c) {
        std::vector<double> xs(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) xs[i] = samples[i][static_cast<size_t>(c)];
        std::sort(xs.begin(), xs.end());
        for (int j = 0; j <= 40; ++j) {
            const double t = -3.0 + 6.0 * j / 40.0;
            const double emp =
                static_cast<double>(std::upper_bound(xs.begin(), xs.end(), t) - xs.begin()) / xs.size();
            axis = std::max(axis, std::fabs(emp - normal_cdf(t)));
        }
    }
    CHECK(rep.convex_proxy >= axis - 1e-12);
}

TEST_CASE("descent/inversion marginals at n=200: lattice floor and normal limit") {
    // The standardized inversion count is essentially continuous at this
    // scale (sd ~ 471 lattice steps) and sits tight against the normal. The
    // descent count is integer-valued with sd = sqrt(201/12) ~ 4.1, so its
    // exact Kolmogorov distance to the continuous normal equals ~0.0486
    // (half the central atom mass, computed from the Eulerian recurrence);
    // the empirical value with 1e5 draws must reproduce that floor.
    const auto samples = sample_perm_w(200, 100000, 3003, 0);
    std::vector<double> des(samples.size()), inv(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        des[i] = samples[i][0];
        inv[i] = samples[i][1];
    }
    const double ks_des = ks_distance(std::move(des), normal_cdf);
    const double ks_inv = ks_distance(std::move(inv), normal_cdf);
    CHECK(ks_des > 0.042);
    CHECK(ks_des < 0.056);
    CHECK(ks_inv < 0.010);
}

TEST_CASE("run_replications: coverage rows and determinism contract") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentConfig::Kind::coverage;
    cfg.n_list = {40};
    cfg.p = 0.5;
    cfg.alpha = 0.05;
    cfg.reps = 30;
    cfg.seed = 99;
    cfg.jobs = 1;
    const ExperimentResult a = run_replications(cfg);
    cfg.jobs = 8;
    const ExperimentResult b = run_replications(cfg);
    CHECK(a.rows == b.rows);
    CHECK(a.columns.size() == 5);
    REQUIRE(a.rows.size() == 30);
    for (const auto& row : a.rows) CHECK((row[4] == 0.0 || row[4] == 1.0));

    cfg.reps = 1;
    const ExperimentResult one = run_replications(cfg);
    REQUIRE(one.rows.size() == 1);
    // equals a direct single call on stream 0
    RngStream rng(99, 0);
    const Graph g = gen_gnp(40, 0.5, rng);
    const TestStatistics s = w_stats(g, 0.5);
    CHECK(one.rows[0][1] == s.w1);
    CHECK(one.rows[0][2] == s.w2);
}

TEST_CASE("run_replications: rate summary") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentConfig::Kind::rate;
    cfg.target = "perm";
    cfg.n_list = {30, 60, 120};
    cfg.reps = 4000;
    cfg.seed = 5;
    const ExperimentResult res = run_replications(cfg);
    REQUIRE(res.rows.size() == 3);
    CHECK(res.summary[0].first == "slope");
    CHECK(res.summary[0].second < 0.0);  // distances shrink with n
}

TEST_CASE("run_replications validates the config") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentConfig::Kind::coverage;
    cfg.n_list = {3};
    CHECK_THROWS_AS(run_replications(cfg), std::invalid_argument);
    cfg.n_list.clear();
    CHECK_THROWS_AS(run_replications(cfg), std::invalid_argument);
    cfg.n_list = {50};
    cfg.reps = 0;
    CHECK_THROWS_AS(run_replications(cfg), std::invalid_argument);
    cfg.reps = 10;
    cfg.kind = ExperimentConfig::Kind::power;
    CHECK_THROWS_AS(run_replications(cfg), std::invalid_argument);  // kernel missing
}
