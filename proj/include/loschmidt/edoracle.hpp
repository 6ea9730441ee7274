#pragma once

#include "loschmidt/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace loschmidt::ed {

inline constexpr int kMaxSites = 14;

/// Dense chain Hamiltonian in the Z-product basis. Bit j of a basis index is site j and
/// a clear bit means Z_j = +1. Every Hamiltonian built here is real symmetric.
struct SpinHamiltonian {
    int n_sites = 0;
    Eigen::MatrixXd matrix;

    [[nodiscard]] Eigen::Index dimension() const noexcept { return matrix.rows(); }
};

/// H_C - branch * sum_j g_j Z_j, periodic chains including the spin wrap bond.
SpinHamiltonian build_spin_hamiltonian(const ChainSpec& spec, const CouplingSpec& coupling, int branch);

/// Sector of the spin-flip parity prod_j Z_j used to pick a ground state.
/// `even` (+1) is an even number of down spins, i.e. an even fermion number.
enum class ParitySector { any, even, odd };

struct SpinGroundState {
    Eigen::VectorXd vector;
    double energy = 0.0;
    int parity = 1;
};

/// Lowest eigenvector, restricted to the requested parity sector. Throws
/// AmbiguousGroundStateError when the lowest level is degenerate within 1e-10.
SpinGroundState ground_state(const SpinHamiltonian& h, ParitySector sector = ParitySector::any);

double site_magnetization(const SpinGroundState& gs, int site);

/// L(t) = |<E0| exp(-i h1 t) |E0>|^2 with |E0> the ground state of h0.
EchoSeries echo_ed(const SpinHamiltonian& h0, const SpinHamiltonian& h1, std::span<const double> times,
                   ParitySector sector = ParitySector::any);

/// L(t) = |<psi| exp(i h0 t) exp(-i h1 t) |psi>|^2 for an arbitrary normalized state.
EchoSeries echo_ed_general(const Eigen::VectorXcd& initial, const SpinHamiltonian& h0, const SpinHamiltonian& h1,
                           std::span<const double> times);

/// H'_C: matrix restricted to blocks of equal Z_T = sum_j Z_j eigenvalue.
struct BlockHamiltonian {
    int n_sites = 0;
    /// Lambda = sum_j Z_j for each block, ascending from -N to N in steps of 2.
    std::vector<int> lambdas;
    /// Basis indices belonging to each block.
    std::vector<std::vector<std::uint32_t>> states;
    std::vector<Eigen::MatrixXd> blocks;

    [[nodiscard]] Eigen::MatrixXd to_dense() const;
};

/// Total magnetization eigenvalue of a basis index.
int total_z(std::uint32_t basis_state, int n_sites);

BlockHamiltonian project_block_diagonal(const SpinHamiltonian& h_c);

/// Strong-coupling echo |<E0| exp(i g t Z_T) exp(-i t H'_C) |E0>|^2 for uniform coupling g.
EchoSeries echo_strong_coupling(const SpinHamiltonian& h_c, double g, std::span<const double> times,
                                ParitySector sector = ParitySector::any);

/// Slow factor |<E0| exp(-i t H'_C) |E0>|^2. It equals echo_strong_coupling at every
/// t = n pi / g, which is where the fast phase returns to one.
EchoSeries strong_coupling_envelope(const SpinHamiltonian& h_c, std::span<const double> times,
                                    ParitySector sector = ParitySector::any);

/// Qubit reduced density matrices rho(t) from evolving |psi> (x) |E0> under the full
/// qubit-plus-chain Hamiltonian and tracing out the chain. Limited to n_sites <= 8.
std::vector<Eigen::Matrix2cd> reduced_qubit_dynamics(const ChainSpec& spec, const CouplingSpec& coupling,
                                                     const QubitState& qubit, std::span<const double> times,
                                                     ParitySector sector = ParitySector::any);

}  // namespace loschmidt::ed
