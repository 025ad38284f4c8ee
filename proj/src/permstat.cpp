#include "graphstein/permstat.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "graphstein/mathutil.hpp"

namespace graphstein {

Permutation Permutation::identity(int n) {
    if (n < 1) throw std::invalid_argument("Permutation: n < 1");
    Permutation p;
    p.v.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) p.v[static_cast<size_t>(i)] = i;
    return p;
}

Permutation Permutation::uniform(int n, RngStream& rng) {
    Permutation p = identity(n);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.below(static_cast<uint64_t>(i) + 1));
        std::swap(p.v[static_cast<size_t>(i)], p.v[static_cast<size_t>(j)]);
    }
    return p;
}

Permutation Permutation::inverse() const {
    Permutation r;
    r.v.assign(v.size(), 0);
    for (int i = 0; i < size(); ++i) r.v[static_cast<size_t>(v[static_cast<size_t>(i)])] = i;
    return r;
}

bool Permutation::valid() const {
    std::vector<bool> seen(v.size(), false);
    for (int x : v) {
        if (x < 0 || x >= size() || seen[static_cast<size_t>(x)]) return false;
        seen[static_cast<size_t>(x)] = true;
    }
    return !v.empty();
}

Permutation read_permutation(std::istream& in) {
    Permutation p;
    long long x;
    while (in >> x) p.v.push_back(static_cast<int>(x) - 1);
    if (!p.valid()) throw std::runtime_error("permutation: not a bijection of 1..n");
    return p;
}

void write_permutation(const Permutation& pi, std::ostream& out) {
    for (int i = 0; i < pi.size(); ++i) {
        if (i) out << ' ';
        out << pi(i) + 1;
    }
    out << '\n';
}

int descents(const Permutation& pi) {
    int d = 0;
    for (int i = 0; i + 1 < pi.size(); ++i)
        if (pi(i) > pi(i + 1)) ++d;
    return d;
}

int64_t inversions(const Permutation& pi) {
    int64_t inv = 0;
    const int n = pi.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (pi(i) > pi(j)) ++inv;
    return inv;
}

StatMatrix::StatMatrix(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("StatMatrix: n < 1");
    upper_.assign(static_cast<size_t>(n) * (n - 1) / 2, 0.0);
}

void StatMatrix::set(int i, int j, double value) {
    if (!(0 <= i && i < j && j < n_)) throw std::invalid_argument("StatMatrix::set: need 0 <= i < j < n");
    upper_[index(i, j)] = value;
}

double StatMatrix::beta() const {
    double best = 0.0;
    for (int i = 0; i < n_; ++i) {
        double row = 0.0;
        for (int j = 0; j < n_; ++j) row += std::fabs(at(i, j));
        if (row > best) best = row;
    }
    return best;
}

double perm_stat(const StatMatrix& m, const Permutation& pi) {
    if (m.size() != pi.size()) throw std::invalid_argument("perm_stat: size mismatch");
    const int n = pi.size();
    double w = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) w += m.at(pi(i), pi(j));
    return w;
}

double cov_lemma2(const StatMatrix& mr, const StatMatrix& ms) {
    if (mr.size() != ms.size()) throw std::invalid_argument("cov_lemma2: size mismatch");
    const int n = mr.size();
    double dot = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) dot += mr.at(i, j) * ms.at(i, j);
    double rows = 0.0;
    for (int i = 0; i < n; ++i) {
        double ar = 0.0, br = 0.0, as = 0.0, bs = 0.0;
        for (int j = i + 1; j < n; ++j) {
            ar += mr.at(i, j);
            as += ms.at(i, j);
        }
        for (int j = 0; j < i; ++j) {
            br += mr.at(j, i);
            bs += ms.at(j, i);
        }
        rows += (ar - br) * (as - bs);
    }
    return (dot + rows) / 3.0;
}

StatMatrix builtin_matrix(int n, BuiltinMatrix kind) {
    if (n < 2) throw std::invalid_argument("builtin_matrix: n < 2");
    StatMatrix m(n);
    if (kind == BuiltinMatrix::descent) {
        const double c = std::sqrt(3.0 / (n + 1));
        for (int i = 0; i + 1 < n; ++i) m.set(i, i + 1, -c);
    } else {
        const double c = std::sqrt(18.0 / (static_cast<double>(n) * (n - 1) * (2.0 * n + 5)));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) m.set(i, j, -c);
    }
    return m;
}

PermStatVector::PermStatVector(std::vector<StatMatrix> matrices) : matrices_(std::move(matrices)) {
    if (matrices_.empty()) throw std::invalid_argument("PermStatVector: no matrices");
    for (const StatMatrix& m : matrices_)
        if (m.size() != matrices_.front().size())
            throw std::invalid_argument("PermStatVector: matrix sizes differ");
}

int PermStatVector::size() const { return matrices_.front().size(); }

std::vector<double> PermStatVector::evaluate(const Permutation& pi) const {
    std::vector<double> w(matrices_.size());
    for (size_t r = 0; r < matrices_.size(); ++r) w[r] = perm_stat(matrices_[r], pi);
    return w;
}

std::vector<double> PermStatVector::covariance() const {
    const size_t d = matrices_.size();
    std::vector<double> cov(d * d);
    for (size_t r = 0; r < d; ++r)
        for (size_t s = r; s < d; ++s) {
            cov[r * d + s] = cov[s * d + r] = cov_lemma2(matrices_[r], matrices_[s]);
        }
    return cov;
}

bool PermStatVector::standardized(double tol) const {
    const size_t d = matrices_.size();
    const std::vector<double> cov = covariance();
    for (size_t r = 0; r < d; ++r)
        if (std::fabs(cov[r * d + r] - 1.0) > tol) return false;
    return true;
}

PermStatVector descent_inversion_vector(int n) {
    std::vector<StatMatrix> ms;
    ms.push_back(builtin_matrix(n, BuiltinMatrix::descent));
    ms.push_back(builtin_matrix(n, BuiltinMatrix::inversion));
    return PermStatVector(std::move(ms));
}

Permutation fulman_step(const Permutation& pi, int i) {
    const int n = pi.size();
    if (i < 0 || i >= n) throw std::invalid_argument("fulman_step: index out of range");
    Permutation r;
    r.v.resize(static_cast<size_t>(n));
    for (int j = 0; j < i; ++j) r.v[static_cast<size_t>(j)] = pi(j);
    for (int j = i; j + 1 < n; ++j) r.v[static_cast<size_t>(j)] = pi(j + 1);
    r.v[static_cast<size_t>(n) - 1] = pi(i);
    return r;
}

std::pair<double, double> standardized_descent_inversion(const Permutation& pi) {
    const int n = pi.size();
    if (n < 2) throw std::invalid_argument("standardized_descent_inversion: n < 2");
    const double des = static_cast<double>(descents(pi));
    const double inv = static_cast<double>(inversions(pi));
    const double w1 = (des - (n - 1) / 2.0) / std::sqrt((n + 1) / 12.0);
    const double w2 =
        (inv - binomial_d(n, 2) / 2.0) / std::sqrt(static_cast<double>(n) * (n - 1) * (2.0 * n + 5) / 72.0);
    return {w1, w2};
}

}  // namespace graphstein
