#ifndef GRAPHSTEIN_PERMSTAT_HPP
#define GRAPHSTEIN_PERMSTAT_HPP

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "graphstein/rng.hpp"

namespace graphstein {

// Permutation of {0..n-1} in one-line notation: v[i] = pi(i).
// Serialized 1-based ("2 1 4 3"), stored 0-based.
struct Permutation {
    std::vector<int> v;

    static Permutation identity(int n);
    static Permutation uniform(int n, RngStream& rng);  // Fisher-Yates

    int size() const { return static_cast<int>(v.size()); }
    int operator()(int i) const { return v[static_cast<size_t>(i)]; }
    Permutation inverse() const;
    bool valid() const;

    bool operator==(const Permutation&) const = default;
};

Permutation read_permutation(std::istream& in);
void write_permutation(const Permutation& pi, std::ostream& out);

int descents(const Permutation& pi);        // #{i : pi(i) > pi(i+1)}
int64_t inversions(const Permutation& pi);  // #{i<j : pi(i) > pi(j)}

// Anti-symmetric n x n matrix; strict upper triangle stored, M[j][i] = -M[i][j]
// and zero diagonal hold structurally.
class StatMatrix {
  public:
    explicit StatMatrix(int n);

    int size() const { return n_; }
    double at(int i, int j) const {
        if (i == j) return 0.0;
        return i < j ? upper_[index(i, j)] : -upper_[index(j, i)];
    }
    void set(int i, int j, double value);  // requires i < j

    // sup_i sum_j |M_ij|
    double beta() const;

  private:
    size_t index(int i, int j) const {
        return static_cast<size_t>(i) * n_ - static_cast<size_t>(i) * (i + 1) / 2 +
               static_cast<size_t>(j - i - 1);
    }
    int n_;
    std::vector<double> upper_;
};

// W = sum_{i<j} M_{pi(i), pi(j)}.
double perm_stat(const StatMatrix& m, const Permutation& pi);

// Exact covariance of two such statistics under a uniform permutation:
//   (1/3) ( sum_{i<j} Mr_ij Ms_ij + sum_i (Ar_i - Br_i)(As_i - Bs_i) )
// with A_i = sum_{j>i} M_ij and B_i = sum_{j<i} M_ji.
double cov_lemma2(const StatMatrix& mr, const StatMatrix& ms);

enum class BuiltinMatrix { descent, inversion };

// The unit-variance matrices behind the descent / inversion statistics:
//   descent:   -/+ sqrt(3/(n+1)) on the first off-diagonal band
//   inversion: -/+ sqrt(18/(n(n-1)(2n+5))) everywhere off the diagonal
StatMatrix builtin_matrix(int n, BuiltinMatrix kind);

// A d-vector of statistics sharing one permutation: W_r = perm_stat(M_r, pi).
class PermStatVector {
  public:
    explicit PermStatVector(std::vector<StatMatrix> matrices);

    int dimension() const { return static_cast<int>(matrices_.size()); }
    int size() const;  // n
    const StatMatrix& matrix(int r) const { return matrices_[static_cast<size_t>(r)]; }

    std::vector<double> evaluate(const Permutation& pi) const;
    // d x d covariance under a uniform permutation, via the closed form
    std::vector<double> covariance() const;
    // every variance equals 1 within tol
    bool standardized(double tol = 1e-12) const;

  private:
    std::vector<StatMatrix> matrices_;
};

// The unit-variance (descent, inversion) pair.
PermStatVector descent_inversion_vector(int n);

// pi' = pi o (i, i+1, ..., n-1) where the cycle maps i -> i+1 -> ... -> n-1 -> i
// (0-based index i). Averaging over a uniform index gives the exact drift
// E_I[W(pi') - W(pi)] = -(2/n) W(pi) for statistics of the perm_stat form.
Permutation fulman_step(const Permutation& pi, int i);

// ((Des - (n-1)/2) / sqrt((n+1)/12), (Inv - C(n,2)/2) / sqrt(n(n-1)(2n+5)/72)).
// Equals (perm_stat(M_descent, pi^-1), perm_stat(M_inversion, pi^-1)).
std::pair<double, double> standardized_descent_inversion(const Permutation& pi);

}  // namespace graphstein

#endif
