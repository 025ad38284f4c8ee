#ifndef GRAPHSTEIN_GRAPHON_HPP
#define GRAPHSTEIN_GRAPHON_HPP

#include <string>
#include <vector>

#include "graphstein/graph.hpp"

namespace graphstein {

// Symmetric kernel [0,1]^2 -> [0,1], represented as a step function: k blocks
// with interior breakpoints 0 < b_1 < ... < b_{k-1} < 1 and a symmetric k x k
// value matrix (upper triangle stored, so symmetry holds structurally).
//
// Three flavours share this representation:
//   constant   - one block, value p
//   block_step - user-supplied breakpoints and values, densities are exact
//                closed-form block sums
//   tabulated  - an m x m uniform grid sampled from some underlying kernel;
//                densities are then midpoint-rule quadrature on that grid, and
//                the quadrature error is controlled by the grid resolution
class GraphonKernel {
  public:
    enum class Kind { constant, block_step, tabulated };

    static GraphonKernel constant(double p);
    static GraphonKernel block_step(std::vector<double> breakpoints,
                                    const std::vector<std::vector<double>>& values);
    static GraphonKernel tabulated(const std::vector<std::vector<double>>& grid);

    double operator()(double x, double y) const;

    Kind kind() const { return kind_; }
    int blocks() const { return k_; }
    double block_measure(int a) const;
    double block_value(int a, int b) const { return cell(a, b); }
    bool is_constant() const { return k_ == 1; }
    int block_of(double x) const;

  private:
    GraphonKernel(Kind kind, std::vector<double> breaks, const std::vector<std::vector<double>>& values);
    double cell(int a, int b) const {
        if (a > b) std::swap(a, b);
        return upper_[static_cast<size_t>(a) * k_ - static_cast<size_t>(a) * (a - 1) / 2 +
                      static_cast<size_t>(b - a)];
    }

    Kind kind_;
    int k_;
    std::vector<double> breaks_;  // interior breakpoints, ascending
    std::vector<double> upper_;   // upper triangle incl. diagonal, row-major
};

// W-random graph G(n, kernel): U_1..U_n iid uniform, then edge {i,j} present
// independently with probability kernel(U_i, U_j). Consumes from one stream:
// the n uniforms first, then the pairs in row-major order.
Graph gen_graphon(int n, const GraphonKernel& kernel, uint64_t seed);

// Homomorphism density t(f, kernel), exact over the block structure
// (for tabulated kernels this is the midpoint rule on the stored grid).
double kernel_density(Pattern f, const GraphonKernel& kernel);

}  // namespace graphstein

#endif
