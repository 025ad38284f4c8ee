#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "graphstein/mathutil.hpp"
#include "graphstein/permstat.hpp"
#include "test_util.hpp"

using namespace graphstein;

namespace {

Permutation from_one_line(const std::vector<int>& one_based) {
    Permutation p;
    for (int v : one_based) p.v.push_back(v - 1);
    REQUIRE(p.valid());
    return p;
}

Permutation reversed(int n) {
    Permutation p;
    for (int i = n - 1; i >= 0; --i) p.v.push_back(i);
    return p;
}

StatMatrix unscaled_descent(int n) {
    StatMatrix m(n);
    for (int i = 0; i + 1 < n; ++i) m.set(i, i + 1, -1.0);
    return m;
}

StatMatrix unscaled_inversion(int n) {
    StatMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m.set(i, j, -1.0);
    return m;
}

}  // namespace

TEST_CASE("descents and inversions on fixed permutations") {
    CHECK(descents(Permutation::identity(7)) == 0);
    CHECK(inversions(Permutation::identity(7)) == 0);
    CHECK(descents(reversed(7)) == 6);
    CHECK(inversions(reversed(7)) == 21);
    const Permutation p = from_one_line({2, 1, 4, 3});
    CHECK(descents(p) == 2);
    CHECK(inversions(p) == 2);
}

TEST_CASE("perm_stat reproduces the affine images of descents and inversions") {
    for (int n : {2, 3, 5, 8}) {
        test::foreach_permutation(n, [&](const Permutation& pi) {
            const Permutation inv = pi.inverse();
            CHECK(perm_stat(unscaled_descent(n), pi) ==
                  doctest::Approx(2.0 * descents(inv) - (n - 1)).epsilon(1e-13));
            CHECK(perm_stat(unscaled_inversion(n), pi) ==
                  doctest::Approx(2.0 * static_cast<double>(inversions(inv)) - binomial_d(n, 2))
                      .epsilon(1e-13));
        });
    }
}

TEST_CASE("perm_stat at the identity is the upper-triangle sum") {
    RngStream rng(5);
    const StatMatrix m = test::random_antisymmetric(6, rng);
    double sum = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) sum += m.at(i, j);
    CHECK(perm_stat(m, Permutation::identity(6)) == doctest::Approx(sum).epsilon(1e-14));
    CHECK_THROWS_AS(perm_stat(m, Permutation::identity(5)), std::invalid_argument);
}

TEST_CASE("StatMatrix is structurally anti-symmetric") {
    RngStream rng(6);
    const StatMatrix m = test::random_antisymmetric(9, rng);
    for (int i = 0; i < 9; ++i) {
        CHECK(m.at(i, i) == 0.0);
        for (int j = 0; j < 9; ++j) CHECK(m.at(i, j) + m.at(j, i) == 0.0);
    }
    StatMatrix w(4);
    CHECK_THROWS_AS(w.set(2, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(w.set(3, 1, 1.0), std::invalid_argument);
}

TEST_CASE("built-in matrices have the stated entries and beta") {
    const StatMatrix d11 = builtin_matrix(11, BuiltinMatrix::descent);
    CHECK(d11.at(3, 4) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(d11.at(4, 3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d11.at(3, 5) == 0.0);

    const StatMatrix i3 = builtin_matrix(3, BuiltinMatrix::inversion);
    CHECK(std::fabs(i3.at(0, 1)) == doctest::Approx(std::sqrt(3.0 / 11.0)).epsilon(1e-15));

    for (int n : {3, 7, 20}) {
        CHECK(builtin_matrix(n, BuiltinMatrix::descent).beta() ==
              doctest::Approx(2.0 * std::sqrt(3.0 / (n + 1))).epsilon(1e-13));
    }
    // beta of both families decays like 1/sqrt(n)
    for (BuiltinMatrix kind : {BuiltinMatrix::descent, BuiltinMatrix::inversion}) {
        const double b100 = builtin_matrix(100, kind).beta();
        const double b400 = builtin_matrix(400, kind).beta();
        CHECK(b400 < b100);
        CHECK(b400 * std::sqrt(400.0) < 3.0 * b100 * std::sqrt(100.0));
    }
}

TEST_CASE("lemma-2 covariance: unit variances for the built-ins") {
    for (int n = 2; n <= 40; ++n) {
        CHECK(cov_lemma2(builtin_matrix(n, BuiltinMatrix::descent), builtin_matrix(n, BuiltinMatrix::descent)) ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cov_lemma2(builtin_matrix(n, BuiltinMatrix::inversion), builtin_matrix(n, BuiltinMatrix::inversion)) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("lemma-2 covariance equals the exhaustive covariance") {
    RngStream rng(99);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 4 + static_cast<int>(rng.below(3));  // 4..6
        const StatMatrix a = test::random_antisymmetric(n, rng);
        const StatMatrix b = test::random_antisymmetric(n, rng);
        double ma = 0, mb = 0, mab = 0, cnt = 0;
        test::foreach_permutation(n, [&](const Permutation& pi) {
            const double wa = perm_stat(a, pi), wb = perm_stat(b, pi);
            ma += wa;
            mb += wb;
            mab += wa * wb;
            cnt += 1;
        });
        ma /= cnt;
        mb /= cnt;
        CHECK(std::fabs(ma) < 1e-12);
        CHECK(std::fabs(mb) < 1e-12);
        const double cov = mab / cnt - ma * mb;
        CHECK(cov == doctest::Approx(cov_lemma2(a, b)).epsilon(1e-10));
    }
    // built-in pair at n = 8 against all 40320 permutations
    const int n = 8;
    const StatMatrix m1 = builtin_matrix(n, BuiltinMatrix::descent);
    const StatMatrix m2 = builtin_matrix(n, BuiltinMatrix::inversion);
    double mab = 0, cnt = 0;
    test::foreach_permutation(n, [&](const Permutation& pi) {
        mab += perm_stat(m1, pi) * perm_stat(m2, pi);
        cnt += 1;
    });
    CHECK(mab / cnt == doctest::Approx(cov_lemma2(m1, m2)).epsilon(1e-10));
}

TEST_CASE("descent-inversion covariance decays like 1/n") {
    // closed form: cov = sqrt(54 (n-1) / ((n+1) n (2n+5))), so n |cov| tends
    // to sqrt(27) ~ 5.2 from below
    for (int n : {10, 100, 1000}) {
        const double c =
            std::fabs(cov_lemma2(builtin_matrix(n, BuiltinMatrix::descent), builtin_matrix(n, BuiltinMatrix::inversion)));
        CHECK(n * c < 6.0);
        CHECK(n * c > 3.0);
        const double closed = std::sqrt(54.0 * (n - 1) / ((n + 1.0) * n * (2.0 * n + 5)));
        CHECK(c == doctest::Approx(closed).epsilon(1e-10));
    }
}

TEST_CASE("fulman_step mechanics") {
    const Permutation id4 = Permutation::identity(4);
    CHECK(fulman_step(id4, 3) == id4);  // the cycle (n) is the identity
    const Permutation stepped = fulman_step(id4, 1);
    CHECK(stepped.v == std::vector<int>{0, 2, 3, 1});  // one-line (1,3,4,2)
    CHECK_THROWS_AS(fulman_step(id4, 4), std::invalid_argument);
    CHECK_THROWS_AS(fulman_step(id4, -1), std::invalid_argument);
}

TEST_CASE("fulman_step drift is exactly -(2/n) W") {
    for (int n = 2; n <= 6; ++n) {
        const StatMatrix m1 = builtin_matrix(n, BuiltinMatrix::descent);
        const StatMatrix m2 = builtin_matrix(n, BuiltinMatrix::inversion);
        RngStream rng(17);
        const StatMatrix mr = test::random_antisymmetric(n, rng);
        test::foreach_permutation(n, [&](const Permutation& pi) {
            double d1 = 0, d2 = 0, dr = 0;
            for (int i = 0; i < n; ++i) {
                const Permutation ps = fulman_step(pi, i);
                d1 += perm_stat(m1, ps) - perm_stat(m1, pi);
                d2 += perm_stat(m2, ps) - perm_stat(m2, pi);
                dr += perm_stat(mr, ps) - perm_stat(mr, pi);
            }
            CHECK(std::fabs(d1 / n + (2.0 / n) * perm_stat(m1, pi)) < 1e-12);
            CHECK(std::fabs(d2 / n + (2.0 / n) * perm_stat(m2, pi)) < 1e-12);
            CHECK(std::fabs(dr / n + (2.0 / n) * perm_stat(mr, pi)) < 1e-12);
        });
    }
}

TEST_CASE("fulman_step preserves the uniform distribution") {
    for (int n = 2; n <= 5; ++n) {
        std::map<std::vector<int>, int> counts;
        int total = 0;
        test::foreach_permutation(n, [&](const Permutation& pi) {
            for (int i = 0; i < n; ++i) {
                ++counts[fulman_step(pi, i).v];
                ++total;
            }
        });
        double fact = 1;
        for (int i = 2; i <= n; ++i) fact *= i;
        CHECK(counts.size() == static_cast<size_t>(fact));
        for (const auto& [perm, c] : counts) CHECK(c == n);
        CHECK(total == static_cast<int>(fact) * n);
    }
}

TEST_CASE("standardized descent/inversion vector") {
    // identity at n=5: Des = 0 -> w1 = -2 / sqrt(0.5)
    const auto [w1, w2] = standardized_descent_inversion(Permutation::identity(5));
    CHECK(w1 == doctest::Approx(-2.0 / std::sqrt(0.5)).epsilon(1e-14));
    CHECK(w2 == doctest::Approx(-5.0 / std::sqrt(5.0 * 4.0 * 15.0 / 72.0)).epsilon(1e-14));

    // consistency with the matrix route applied to the inverse
    const StatMatrix m1 = builtin_matrix(6, BuiltinMatrix::descent);
    const StatMatrix m2 = builtin_matrix(6, BuiltinMatrix::inversion);
    test::foreach_permutation(6, [&](const Permutation& pi) {
        const auto [v1, v2] = standardized_descent_inversion(pi);
        const Permutation inv = pi.inverse();
        CHECK(v1 == doctest::Approx(perm_stat(m1, inv)).epsilon(1e-12));
        CHECK(v2 == doctest::Approx(perm_stat(m2, inv)).epsilon(1e-12));
    });

    // exhaustive moments at n = 6
    double e1 = 0, e2 = 0, v1s = 0, v2s = 0, cnt = 0;
    test::foreach_permutation(6, [&](const Permutation& pi) {
        const auto [a, b] = standardized_descent_inversion(pi);
        e1 += a;
        e2 += b;
        v1s += a * a;
        v2s += b * b;
        cnt += 1;
    });
    CHECK(std::fabs(e1 / cnt) < 1e-12);
    CHECK(std::fabs(e2 / cnt) < 1e-12);
    CHECK(v1s / cnt == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v2s / cnt == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform sampling and expected perm_stat of zero") {
    RngStream rng(4242);
    const Permutation pi = Permutation::uniform(200, rng);
    CHECK(pi.valid());

    // E perm_stat = 0 by exhaustive enumeration, random matrices, n <= 7
    RngStream mr(77);
    for (int n : {3, 5, 7}) {
        const StatMatrix m = test::random_antisymmetric(n, mr);
        double mean = 0, cnt = 0;
        test::foreach_permutation(n, [&](const Permutation& q) {
            mean += perm_stat(m, q);
            cnt += 1;
        });
        CHECK(std::fabs(mean / cnt) < 1e-12);
    }
}

TEST_CASE("PermStatVector bundles matrices and knows its standardization") {
    const PermStatVector v = descent_inversion_vector(9);
    CHECK(v.dimension() == 2);
    CHECK(v.size() == 9);
    CHECK(v.standardized());
    const std::vector<double> cov = v.covariance();
    CHECK(cov[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cov[3] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cov[1] == doctest::Approx(cov[2]).epsilon(1e-14));

    RngStream rng(808);
    const Permutation pi = Permutation::uniform(9, rng);
    const std::vector<double> w = v.evaluate(pi);
    CHECK(w[0] == doctest::Approx(perm_stat(v.matrix(0), pi)).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(perm_stat(v.matrix(1), pi)).epsilon(1e-14));

    std::vector<StatMatrix> raw;
    raw.push_back(test::random_antisymmetric(6, rng));
    const PermStatVector unscaled{std::move(raw)};
    CHECK_FALSE(unscaled.standardized(1e-6));
    std::vector<StatMatrix> mixed;
    mixed.push_back(StatMatrix(4));
    mixed.push_back(StatMatrix(5));
    CHECK_THROWS_AS(PermStatVector{std::move(mixed)}, std::invalid_argument);
}

TEST_CASE("permutation serialization round trip") {
    const Permutation p = from_one_line({3, 1, 4, 2, 5});
    std::stringstream ss;
    write_permutation(p, ss);
    CHECK(ss.str() == "3 1 4 2 5\n");
    const Permutation q = read_permutation(ss);
    CHECK(p == q);
    std::stringstream bad("1 1 3");
    CHECK_THROWS_AS(read_permutation(bad), std::runtime_error);
}
