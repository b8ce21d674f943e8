// Shared generators for the test suites. Deterministic but not part of the
// library's reproducibility contract.

#pragma once

#include "thermoscale/ops.hpp"

#include <random>

namespace testsupport {

using thermoscale::Complex;
using thermoscale::Matrix;

inline Matrix random_complex(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(dist(gen), dist(gen));
    return m;
}

inline Matrix random_hermitian(Eigen::Index dim, unsigned seed) {
    Matrix g = random_complex(dim, dim, seed);
    return 0.5 * (g + g.adjoint()).eval();
}

inline Matrix random_density(Eigen::Index dim, unsigned seed) {
    Matrix g = random_complex(dim, dim, seed);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

}  // namespace testsupport
