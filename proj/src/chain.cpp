#include "thermoscale/chain.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace thermoscale {
namespace chain {

namespace {

// Trace of a product of equal-sized matrices without forming the product.
Complex product_trace(const Matrix& a, const Matrix& b) {
    return (a.transpose().cwiseProduct(b)).sum();
}

// On-site block (n/2) sum_a A_a s_a.
Matrix local_block(const ChainSpec& spec, const ops::GeneratorSet& gens) {
    Matrix h = Matrix::Zero(spec.n, spec.n);
    for (int a = 0; a < gens.count(); ++a) h += spec.local(a) * gens[a];
    return (spec.n / 2.0) * h;
}

// Nearest-neighbour block (n^2/4) sum_ab C_ab s_a x s_b on two adjacent sites.
Matrix bond_block(const ChainSpec& spec, const ops::GeneratorSet& gens) {
    Eigen::Index d = static_cast<Eigen::Index>(spec.n) * spec.n;
    Matrix h = Matrix::Zero(d, d);
    for (int a = 0; a < gens.count(); ++a)
        for (int b = 0; b < gens.count(); ++b)
            if (spec.coupling(a, b) != 0.0)
                h += spec.coupling(a, b) * ops::kron(gens[a], gens[b]);
    return (spec.n * spec.n / 4.0) * h;
}

// The bond that closes the ring; s_b lands on site 1, s_a on site L.
ops::ChainOperator wrap_bond(const ChainSpec& spec, const ops::GeneratorSet& gens) {
    Eigen::Index d = ops::space_dim(spec.n, spec.L);
    ops::ChainOperator op{spec.n, spec.L, Matrix::Zero(d, d)};
    for (int a = 0; a < gens.count(); ++a)
        for (int b = 0; b < gens.count(); ++b)
            if (spec.coupling(a, b) != 0.0)
                op.mat += spec.coupling(a, b) * ops::embed_pair(gens, a, b, spec.L, spec.L).mat;
    op.mat *= spec.n * spec.n / 4.0;
    return op;
}

void check_generators(const ChainSpec& spec, const ops::GeneratorSet& gens) {
    if (gens.n != spec.n)
        throw std::invalid_argument("generator set built for a different level count");
}

}  // namespace

void validate(const ChainSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("chain spec needs n >= 2");
    if (spec.L < 2) throw std::invalid_argument("chain spec needs L >= 2");
    int m = spec.n * spec.n - 1;
    if (spec.local.size() != m)
        throw std::invalid_argument("local coefficient vector must have n^2 - 1 entries");
    if (spec.coupling.rows() != m || spec.coupling.cols() != m)
        throw std::invalid_argument("coupling matrix must be (n^2 - 1) square");
    if (!spec.local.allFinite() || !spec.coupling.allFinite())
        throw std::invalid_argument("chain coefficients must be finite");
}

PartitionSpec make_partition(int group_size, int L) {
    if (group_size < 1 || group_size > L || L % group_size != 0)
        throw std::invalid_argument("group size " + std::to_string(group_size) +
                                    " does not divide the chain length " + std::to_string(L));
    return PartitionSpec{group_size, L / group_size};
}

ChainSpec to_chain_spec(const NumericModel& model, int L) {
    if (model.c.rows() != 3 || model.c.cols() != 3)
        throw std::invalid_argument("two-level coupling pattern must be 3x3");
    ChainSpec spec;
    spec.n = 2;
    spec.L = L;
    spec.local = RealVector::Zero(3);
    spec.local(2) = model.delta_e / 2.0;
    spec.coupling = model.lambda * model.c;
    validate(spec);
    return spec;
}

ops::ChainOperator build_hamiltonian(const ChainSpec& spec, const ops::GeneratorSet& gens) {
    validate(spec);
    check_generators(spec, gens);

    Matrix h_loc = local_block(spec, gens);
    Matrix h_int = bond_block(spec, gens);

    Eigen::Index d = ops::space_dim(spec.n, spec.L);
    ops::ChainOperator H{spec.n, spec.L, Matrix::Zero(d, d)};
    for (int j = 1; j <= spec.L; ++j) H.mat += ops::embed_block(h_loc, spec.n, j, 1, spec.L).mat;
    for (int j = 1; j < spec.L; ++j) H.mat += ops::embed_block(h_int, spec.n, j, 2, spec.L).mat;
    H.mat += wrap_bond(spec, gens).mat;
    return H;
}

std::pair<RealVector, RealMatrix> extract_coefficients(const ops::ChainOperator& H,
                                                       const ops::GeneratorSet& gens,
                                                       int probe_site) {
    if (gens.n != H.n)
        throw std::invalid_argument("generator set built for a different level count");
    if (probe_site < 1 || probe_site > H.L)
        throw std::invalid_argument("probe site outside the chain");

    int m = gens.count();
    double d = static_cast<double>(H.dim());
    RealVector local(m);
    RealMatrix coupling(m, m);
    for (int a = 0; a < m; ++a) {
        Matrix probe = ops::embed_single(gens, a, probe_site, H.L).mat;
        local(a) = product_trace(H.mat, probe).real() / d;
    }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            Matrix probe = ops::embed_pair(gens, a, b, probe_site, H.L).mat;
            coupling(a, b) = product_trace(H.mat, probe).real() / d;
        }
    return {local, coupling};
}

SplitHamiltonian split_partition(const ChainSpec& spec, const PartitionSpec& partition,
                                 const ops::GeneratorSet& gens) {
    validate(spec);
    check_generators(spec, gens);
    if (partition.group_size * partition.group_count != spec.L)
        throw std::invalid_argument("partition does not cover the chain");

    Matrix h_loc = local_block(spec, gens);
    Matrix h_int = bond_block(spec, gens);

    Eigen::Index d = ops::space_dim(spec.n, spec.L);
    SplitHamiltonian parts{{spec.n, spec.L, Matrix::Zero(d, d)},
                           {spec.n, spec.L, Matrix::Zero(d, d)}};
    for (int j = 1; j <= spec.L; ++j)
        parts.group_part.mat += ops::embed_block(h_loc, spec.n, j, 1, spec.L).mat;

    for (int j = 1; j < spec.L; ++j) {
        Matrix bond = ops::embed_block(h_int, spec.n, j, 2, spec.L).mat;
        if (j % partition.group_size == 0)
            parts.interaction.mat += bond;
        else
            parts.group_part.mat += bond;
    }
    parts.interaction.mat += wrap_bond(spec, gens).mat;
    return parts;
}

ops::ChainOperator build_group_hamiltonian(const ChainSpec& spec, int group_size,
                                           const ops::GeneratorSet& gens) {
    validate(spec);
    check_generators(spec, gens);
    if (group_size < 1 || group_size > spec.L)
        throw std::invalid_argument("group size outside the chain");

    Matrix h_loc = local_block(spec, gens);
    Eigen::Index d = ops::space_dim(spec.n, group_size);
    ops::ChainOperator H{spec.n, group_size, Matrix::Zero(d, d)};
    for (int j = 1; j <= group_size; ++j)
        H.mat += ops::embed_block(h_loc, spec.n, j, 1, group_size).mat;
    if (group_size > 1) {
        Matrix h_int = bond_block(spec, gens);
        for (int j = 1; j < group_size; ++j)
            H.mat += ops::embed_block(h_int, spec.n, j, 2, group_size).mat;
    }
    return H;
}

NumericModel sample_random_model(std::uint64_t seed, double lambda, double delta_e) {
    std::mt19937_64 gen(seed);
    NumericModel model;
    model.delta_e = delta_e;
    model.lambda = lambda;
    model.c = RealMatrix(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            // Top 53 bits give a uniform double in [0, 1); mapped to [-1, 1).
            double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
            model.c(a, b) = 2.0 * u - 1.0;
        }
    return model;
}

}  // namespace chain
}  // namespace thermoscale
