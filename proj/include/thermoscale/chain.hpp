// chain.hpp -- coupled-chain Hamiltonians, coefficient extraction,
// partition splitting, random model draws.

#pragma once

#include "thermoscale/ops.hpp"

#include <cstdint>
#include <utility>

namespace thermoscale {
namespace chain {

// Translation-invariant chain of L identical n-level systems on a ring.
// `local` holds the n^2 - 1 on-site coefficients, `coupling` the
// (n^2 - 1)^2 nearest-neighbour coefficients, both in generator order.
struct ChainSpec {
    int n = 2;
    int L = 2;
    RealVector local;
    RealMatrix coupling;
};

// The two-level model used for the numerical runs: level splitting
// delta_e, coupling strength lambda, and a 3x3 dimensionless coupling
// pattern c.
struct NumericModel {
    double delta_e = 1.0;
    double lambda = 1.0;
    RealMatrix c;
};

// Division of the ring into group_count contiguous groups of group_size
// sites each; group 1 is sites 1 .. group_size.
struct PartitionSpec {
    int group_size = 1;
    int group_count = 1;
};

void validate(const ChainSpec& spec);

PartitionSpec make_partition(int group_size, int L);

ChainSpec to_chain_spec(const NumericModel& model, int L);

ops::ChainOperator build_hamiltonian(const ChainSpec& spec, const ops::GeneratorSet& gens);

// Reads the local and coupling coefficients back off a chain operator by
// tracing against embedded generator strings at `probe_site`. Exact
// inverse of build_hamiltonian for translation-invariant input.
std::pair<RealVector, RealMatrix> extract_coefficients(const ops::ChainOperator& H,
                                                       const ops::GeneratorSet& gens,
                                                       int probe_site = 1);

// H = H0 + I with I collecting exactly the group-boundary bonds. Both
// parts are assembled independently from the spec, so H0 + I == H is a
// real consistency check rather than a tautology.
struct SplitHamiltonian {
    ops::ChainOperator group_part;
    ops::ChainOperator interaction;
};

SplitHamiltonian split_partition(const ChainSpec& spec, const PartitionSpec& partition,
                                 const ops::GeneratorSet& gens);

// Open-chain Hamiltonian of a single group (all groups are identical).
ops::ChainOperator build_group_hamiltonian(const ChainSpec& spec, int group_size,
                                           const ops::GeneratorSet& gens);

// Coupling pattern c with entries uniform on [-1, 1), reproducible from
// the seed alone.
NumericModel sample_random_model(std::uint64_t seed, double lambda, double delta_e = 1.0);

}  // namespace chain
}  // namespace thermoscale
