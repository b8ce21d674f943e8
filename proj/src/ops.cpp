#include "thermoscale/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace thermoscale {
namespace ops {

namespace {

void check_site(int site, int L) {
    if (site < 1 || site > L)
        throw std::invalid_argument("site index " + std::to_string(site) +
                                    " outside 1.." + std::to_string(L));
}

void check_alpha(const GeneratorSet& gens, int alpha) {
    if (alpha < 0 || alpha >= gens.count())
        throw std::invalid_argument("generator index " + std::to_string(alpha) +
                                    " outside 0.." + std::to_string(gens.count() - 1));
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

GeneratorSet build_generators(int n) {
    if (n < 2) throw std::invalid_argument("generator sets need n >= 2");

    GeneratorSet gens;
    gens.n = n;
    gens.matrices.reserve(static_cast<std::size_t>(n) * n - 1);
    const Complex i_unit(0.0, 1.0);

    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            Matrix m = Matrix::Zero(n, n);
            m(j, k) = 1.0;
            m(k, j) = 1.0;
            gens.matrices.push_back(m);
        }

    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            Matrix m = Matrix::Zero(n, n);
            m(j, k) = -i_unit;
            m(k, j) = i_unit;
            gens.matrices.push_back(m);
        }

    for (int l = 1; l < n; ++l) {
        Matrix m = Matrix::Zero(n, n);
        double c = std::sqrt(2.0 / (l * (l + 1.0)));
        for (int j = 0; j < l; ++j) m(j, j) = c;
        m(l, l) = -l * c;
        gens.matrices.push_back(m);
    }

    return gens;
}

ChainOperator embed_block(const Matrix& block, int n, int first_site, int block_sites, int L) {
    if (L < 1) throw std::invalid_argument("chain length must be positive");
    if (block_sites < 1 || first_site < 1 || first_site + block_sites - 1 > L)
        throw std::invalid_argument("block does not fit on the chain");
    Eigen::Index bd = space_dim(n, block_sites);
    if (block.rows() != bd || block.cols() != bd)
        throw std::invalid_argument("block dimension does not match its site count");

    Matrix left = Matrix::Identity(space_dim(n, first_site - 1), space_dim(n, first_site - 1));
    Matrix right = Matrix::Identity(space_dim(n, L - first_site - block_sites + 1),
                                    space_dim(n, L - first_site - block_sites + 1));
    return ChainOperator{n, L, kron(kron(left, block), right)};
}

ChainOperator embed_single(const GeneratorSet& gens, int alpha, int site, int L) {
    check_alpha(gens, alpha);
    check_site(site, L);
    return embed_block(gens[alpha], gens.n, site, 1, L);
}

ChainOperator embed_pair(const GeneratorSet& gens, int alpha, int beta, int site, int L) {
    check_alpha(gens, alpha);
    check_alpha(gens, beta);
    check_site(site, L);
    if (L < 2) throw std::invalid_argument("pair embedding needs at least two sites");

    if (site < L) {
        return embed_block(kron(gens[alpha], gens[beta]), gens.n, site, 2, L);
    }
    // Wraparound bond: s_beta sits on site 1, s_alpha on site L.
    Matrix mid = Matrix::Identity(space_dim(gens.n, L - 2), space_dim(gens.n, L - 2));
    return ChainOperator{gens.n, L, kron(kron(gens[beta], mid), gens[alpha])};
}

Matrix partial_trace(const Matrix& full, int n, int L, const std::vector<int>& keep) {
    if (full.rows() != full.cols())
        throw std::invalid_argument("partial trace expects a square matrix");
    if (full.rows() != space_dim(n, L))
        throw std::invalid_argument("matrix dimension does not match n^L");
    if (keep.empty())
        throw std::invalid_argument("keep set must not be empty");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        check_site(keep[i], L);
        if (i > 0 && keep[i] != keep[i - 1] + 1)
            throw std::invalid_argument("only contiguous ascending keep sets are supported");
    }

    int first = keep.front();
    int last = keep.back();
    Eigen::Index dl = space_dim(n, first - 1);
    Eigen::Index dm = space_dim(n, last - first + 1);
    Eigen::Index dr = space_dim(n, L - last);

    Matrix out = Matrix::Zero(dm, dm);
    for (Eigen::Index l = 0; l < dl; ++l)
        for (Eigen::Index m = 0; m < dm; ++m)
            for (Eigen::Index mp = 0; mp < dm; ++mp) {
                Complex acc(0.0, 0.0);
                Eigen::Index row0 = (l * dm + m) * dr;
                Eigen::Index col0 = (l * dm + mp) * dr;
                for (Eigen::Index r = 0; r < dr; ++r) acc += full(row0 + r, col0 + r);
                out(m, mp) += acc;
            }
    return out;
}

}  // namespace ops
}  // namespace thermoscale
