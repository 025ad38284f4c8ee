#include "graphstein/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphstein {

namespace {

void check_prob(double v, const char* what) {
    if (std::isnan(v) || v < 0.0 || v > 1.0) throw std::invalid_argument(std::string(what) + " outside [0,1]");
}

}  // namespace

GraphonKernel::GraphonKernel(Kind kind, std::vector<double> breaks,
                             const std::vector<std::vector<double>>& values)
    : kind_(kind), k_(static_cast<int>(values.size())), breaks_(std::move(breaks)) {
    if (k_ < 1) throw std::invalid_argument("GraphonKernel: empty value matrix");
    if (static_cast<int>(breaks_.size()) != k_ - 1)
        throw std::invalid_argument("GraphonKernel: need exactly k-1 breakpoints for k blocks");
    double prev = 0.0;
    for (double b : breaks_) {
        if (!(b > prev && b < 1.0)) throw std::invalid_argument("GraphonKernel: breakpoints must be ascending in (0,1)");
        prev = b;
    }
    for (const auto& row : values)
        if (static_cast<int>(row.size()) != k_) throw std::invalid_argument("GraphonKernel: value matrix not square");
    // store upper triangle; reject asymmetric input instead of silently averaging
    upper_.reserve(static_cast<size_t>(k_) * (k_ + 1) / 2);
    for (int a = 0; a < k_; ++a) {
        for (int b = a; b < k_; ++b) {
            const double v = values[static_cast<size_t>(a)][static_cast<size_t>(b)];
            const double vt = values[static_cast<size_t>(b)][static_cast<size_t>(a)];
            if (v != vt) throw std::invalid_argument("GraphonKernel: value matrix not symmetric");
            check_prob(v, "GraphonKernel value");
            upper_.push_back(v);
        }
    }
}

GraphonKernel GraphonKernel::constant(double p) {
    check_prob(p, "GraphonKernel constant");
    return GraphonKernel(Kind::constant, {}, {{p}});
}

GraphonKernel GraphonKernel::block_step(std::vector<double> breakpoints,
                                        const std::vector<std::vector<double>>& values) {
    return GraphonKernel(Kind::block_step, std::move(breakpoints), values);
}

GraphonKernel GraphonKernel::tabulated(const std::vector<std::vector<double>>& grid) {
    const int m = static_cast<int>(grid.size());
    if (m < 1) throw std::invalid_argument("GraphonKernel: empty grid");
    std::vector<double> breaks(static_cast<size_t>(m) - 1);
    for (int i = 1; i < m; ++i) breaks[static_cast<size_t>(i) - 1] = static_cast<double>(i) / m;
    return GraphonKernel(Kind::tabulated, std::move(breaks), grid);
}

int GraphonKernel::block_of(double x) const {
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return static_cast<int>(it - breaks_.begin());
}

double GraphonKernel::operator()(double x, double y) const {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
        throw std::invalid_argument("GraphonKernel: argument outside [0,1]");
    return cell(block_of(x), block_of(y));
}

double GraphonKernel::block_measure(int a) const {
    if (a < 0 || a >= k_) throw std::invalid_argument("block_measure: index out of range");
    const double lo = a == 0 ? 0.0 : breaks_[static_cast<size_t>(a) - 1];
    const double hi = a == k_ - 1 ? 1.0 : breaks_[static_cast<size_t>(a)];
    return hi - lo;
}

Graph gen_graphon(int n, const GraphonKernel& kernel, uint64_t seed) {
    Graph g(n);
    RngStream rng(seed);
    std::vector<int> block(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        // only the block of U_i matters for a step kernel
        const double u = rng.next_double();
        block[static_cast<size_t>(i)] = kernel.is_constant() ? 0 : kernel.block_of(u);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double pij = kernel.block_value(block[static_cast<size_t>(i)], block[static_cast<size_t>(j)]);
            if (rng.next_double() < pij) g.add_edge(i, j);
        }
    }
    return g;
}

double kernel_density(Pattern f, const GraphonKernel& kernel) {
    const int k = kernel.blocks();
    std::vector<double> m(static_cast<size_t>(k));
    for (int a = 0; a < k; ++a) m[static_cast<size_t>(a)] = kernel.block_measure(a);

    // B = diag(m) * V; densities of the built-in patterns are block sums that
    // reduce to traces / bilinear forms of powers of B.
    std::vector<double> b(static_cast<size_t>(k) * k);
    for (int a = 0; a < k; ++a)
        for (int c = 0; c < k; ++c)
            b[static_cast<size_t>(a) * k + c] = m[static_cast<size_t>(a)] * kernel.block_value(a, c);

    auto matmul = [k](const std::vector<double>& x, const std::vector<double>& y) {
        std::vector<double> r(static_cast<size_t>(k) * k, 0.0);
        for (int i = 0; i < k; ++i)
            for (int l = 0; l < k; ++l) {
                const double xi = x[static_cast<size_t>(i) * k + l];
                if (xi == 0.0) continue;
                for (int j = 0; j < k; ++j) r[static_cast<size_t>(i) * k + j] += xi * y[static_cast<size_t>(l) * k + j];
            }
        return r;
    };
    auto trace = [k](const std::vector<double>& x) {
        double t = 0;
        for (int i = 0; i < k; ++i) t += x[static_cast<size_t>(i) * k + i];
        return t;
    };

    switch (f) {
        case Pattern::k2: {
            double t = 0;
            for (int a = 0; a < k; ++a)
                for (int c = 0; c < k; ++c)
                    t += m[static_cast<size_t>(a)] * kernel.block_value(a, c) * m[static_cast<size_t>(c)];
            return t;
        }
        case Pattern::k3:
            return trace(matmul(matmul(b, b), b));
        case Pattern::c4: {
            const std::vector<double> b2 = matmul(b, b);
            return trace(matmul(b2, b2));
        }
    }
    throw std::logic_error("kernel_density");
}

}  // namespace graphstein
