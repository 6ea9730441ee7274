#pragma once

#include "loschmidt/model.hpp"

#include <Eigen/Dense>

#include <span>

namespace loschmidt::quadratic {

/// H = sum_ij a_ij c_i^dag c_j + 1/2 sum_ij (b_ij c_i^dag c_j^dag + h.c.) + offset,
/// with a real symmetric and b real antisymmetric.
///
/// Spins map to fermions with an occupied site meaning spin down, Z_j = 1 - 2 c_j^dag c_j,
/// so the chain field enters a's diagonal as +2 lambda_j.
struct QuadraticHamiltonian {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    double offset = 0.0;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(a.rows()); }
};

/// Throws ConfigError unless a = a^T and b = -b^T within 1e-12.
void validate(const QuadraticHamiltonian& h);

/// Free-fermion form of H_C - branch * sum_j g_j Z_j. Periodic chains get the
/// fermion-periodic wrap bond (the Jordan-Wigner parity string is dropped); open
/// chains are mapped exactly.
QuadraticHamiltonian build_quadratic(const ChainSpec& spec, const CouplingSpec& coupling, int branch);

/// Bogoliubov vacuum of a quadratic Hamiltonian.
///
/// Mode creation operators are eta_k^dag = sum_i (u_ik c_i^dag + v_ik c_i) and
/// H = sum_k energies_k eta_k^dag eta_k + ground_energy.
struct GaussianGroundState {
    Eigen::MatrixXd u;
    Eigen::MatrixXd v;
    Eigen::VectorXd energies;
    double ground_energy = 0.0;
    /// +1 for an even number of fermions (even number of down spins), -1 for odd.
    int parity = 1;
    /// Some eigenmode has energy below 1e-10; the vacuum is then one of several ground states.
    bool degenerate = false;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(u.rows()); }
};

GaussianGroundState ground_state(const QuadraticHamiltonian& h);

/// Largest entry of |u^T u + v^T v - 1| and |u^T v + v^T u|.
double canonical_defect(const GaussianGroundState& gs);

/// L(t) = |<gs0| exp(-i h1 t) |gs0>|^2 from the overlap determinant of the two vacua.
/// Time points are independent; `jobs` bounds the worker threads.
EchoSeries echo_overlap(const GaussianGroundState& gs0, const QuadraticHamiltonian& h1,
                        std::span<const double> times, unsigned jobs = 1);

/// <Z_site> = 1 - 2 <c^dag c>_site.
double site_magnetization(const GaussianGroundState& gs, int site);

/// Short-time one-site formula L(t) = 1 - (1 - <Z>^2) sin^2(g t).
EchoSeries short_time_echo(double mean_z, double g, std::span<const double> times);

}  // namespace loschmidt::quadratic
