#include "loschmidt/quadratic.hpp"

#include "loschmidt/error.hpp"
#include "loschmidt/parallel.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <string>

namespace loschmidt::quadratic {

namespace {
constexpr double kSymmetryTol = 1e-12;
constexpr double kZeroMode = 1e-10;
}  // namespace

void validate(const QuadraticHamiltonian& h) {
    const auto n = h.a.rows();
    if (h.a.cols() != n || h.b.rows() != n || h.b.cols() != n) {
        throw ConfigError("quadratic Hamiltonian blocks must be square and of equal size");
    }
    if ((h.a - h.a.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
        throw ConfigError("hopping matrix is not symmetric");
    }
    if ((h.b + h.b.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
        throw ConfigError("pairing matrix is not antisymmetric");
    }
}

QuadraticHamiltonian build_quadratic(const ChainSpec& spec, const CouplingSpec& coupling, int branch) {
    validate(spec);
    if (branch != 0 && branch != 1) {
        throw ConfigError("branch must be 0 or 1");
    }
    const int n = spec.n_sites;
    const auto g = coupling.site_strengths(n);

    QuadraticHamiltonian h;
    h.a = Eigen::MatrixXd::Zero(n, n);
    h.b = Eigen::MatrixXd::Zero(n, n);
    h.offset = 0.0;
    for (int j = 0; j < n; ++j) {
        const double field = spec.lambda + branch * g[static_cast<std::size_t>(j)];
        h.a(j, j) = 2.0 * field;
        h.offset -= field;
    }
    auto bond = [&](int i, int j) {
        h.a(i, j) -= 1.0;
        h.a(j, i) -= 1.0;
        h.b(i, j) -= spec.gamma;
        h.b(j, i) += spec.gamma;
    };
    for (int j = 0; j + 1 < n; ++j) {
        bond(j, j + 1);
    }
    if (spec.boundary == Boundary::periodic) {
        bond(n - 1, 0);
    }
    return h;
}

GaussianGroundState ground_state(const QuadraticHamiltonian& h) {
    validate(h);
    // (a - b) psi_k = e_k phi_k and (a + b) phi_k = e_k psi_k with u = (phi + psi)/2,
    // v = (phi - psi)/2. The SVD keeps phi and psi orthogonal even for zero modes.
    const Eigen::MatrixXd m = h.a - h.b;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd& phi = svd.matrixU();
    const Eigen::MatrixXd& psi = svd.matrixV();

    GaussianGroundState gs;
    gs.u = 0.5 * (phi + psi);
    gs.v = 0.5 * (phi - psi);
    gs.energies = svd.singularValues();
    gs.ground_energy = h.offset + 0.5 * (h.a.trace() - gs.energies.sum());
    gs.parity = phi.determinant() * psi.determinant() > 0.0 ? 1 : -1;
    gs.degenerate = gs.energies.size() > 0 && gs.energies.minCoeff() < kZeroMode;
    return gs;
}

double canonical_defect(const GaussianGroundState& gs) {
    const auto n = gs.u.cols();
    const Eigen::MatrixXd norm = gs.u.transpose() * gs.u + gs.v.transpose() * gs.v - Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd anti = gs.u.transpose() * gs.v + gs.v.transpose() * gs.u;
    return std::max(norm.cwiseAbs().maxCoeff(), anti.cwiseAbs().maxCoeff());
}

EchoSeries echo_overlap(const GaussianGroundState& gs0, const QuadraticHamiltonian& h1,
                        std::span<const double> times, unsigned jobs) {
    if (gs0.size() != h1.size()) {
        throw ConfigError("ground state has " + std::to_string(gs0.size()) + " modes but Hamiltonian has " +
                          std::to_string(h1.size()));
    }
    const GaussianGroundState gs1 = ground_state(h1);
    const auto n = gs0.u.rows();

    // Annihilators of gs0 in the eigenmodes of h1: d = x eta + y eta^dag.
    const Eigen::MatrixXd x = gs0.u.transpose() * gs1.u + gs0.v.transpose() * gs1.v;
    const Eigen::MatrixXd y = gs0.u.transpose() * gs1.v + gs0.v.transpose() * gs1.u;
    Eigen::MatrixXd xy(n, 2 * n);
    xy << x, y;
    const Eigen::MatrixXd xy_t = xy.transpose();
    const Eigen::VectorXd& e = gs1.energies;

    EchoSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.resize(times.size());

    // Evolved annihilators are the same combination with phases exp(+-i e t); the squared
    // overlap of the two vacua is |det M| with M = x D* x^T + y D y^T.
    parallel_for(times.size(), jobs, [&](std::size_t ti) {
        const double t = times[ti];
        Eigen::MatrixXd scaled_re(n, 2 * n);
        Eigen::MatrixXd scaled_im(n, 2 * n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double c = std::cos(e(k) * t);
            const double s = std::sin(e(k) * t);
            scaled_re.col(k) = c * x.col(k);
            scaled_re.col(n + k) = c * y.col(k);
            scaled_im.col(k) = -s * x.col(k);
            scaled_im.col(n + k) = s * y.col(k);
        }
        Eigen::MatrixXd re(n, n);
        Eigen::MatrixXd im(n, n);
        // M is complex symmetric: only the lower triangles are multiplied out.
        re.triangularView<Eigen::Lower>() = scaled_re * xy_t;
        im.triangularView<Eigen::Lower>() = scaled_im * xy_t;
        Eigen::MatrixXcd m(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = j; i < n; ++i) {
                m(i, j) = {re(i, j), im(i, j)};
                m(j, i) = m(i, j);
            }
        }
        const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
        double log_abs = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            log_abs += std::log(std::abs(lu.matrixLU()(i, i)));
        }
        out.values[ti] = clamp_echo(std::exp(log_abs));
    });
    return out;
}

double site_magnetization(const GaussianGroundState& gs, int site) {
    if (site < 0 || site >= gs.size()) {
        throw ConfigError("site " + std::to_string(site) + " outside chain of " + std::to_string(gs.size()) +
                          " sites");
    }
    // c_i = sum_k (u_ik eta_k + v_ik eta_k^dag), so <c_i^dag c_i> = sum_k v_ik^2.
    const double occupation = gs.v.row(site).squaredNorm();
    return 1.0 - 2.0 * occupation;
}

EchoSeries short_time_echo(double mean_z, double g, std::span<const double> times) {
    if (!(std::abs(mean_z) <= 1.0)) {
        throw ConfigError("magnetization must lie in [-1, 1]");
    }
    EchoSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.reserve(times.size());
    const double depth = 1.0 - mean_z * mean_z;
    for (double t : times) {
        const double s = std::sin(g * t);
        out.values.push_back(1.0 - depth * s * s);
    }
    return out;
}

}  // namespace loschmidt::quadratic
