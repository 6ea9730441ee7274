#include "loschmidt/edoracle.hpp"

#include "loschmidt/error.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <string>

namespace loschmidt::ed {

namespace {

using Complex = std::complex<double>;
constexpr double kDegeneracyTol = 1e-10;
constexpr double kNormTol = 1e-10;
constexpr int kMaxJointSites = 8;

double z_value(std::uint32_t state, int site) { return (state >> site) & 1U ? -1.0 : 1.0; }

int parity_of(std::uint32_t state) { return std::popcount(state) % 2 == 0 ? 1 : -1; }

struct SectorSpectrum {
    std::vector<std::uint32_t> states;
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
};

Eigen::MatrixXd restrict(const Eigen::MatrixXd& m, const std::vector<std::uint32_t>& states) {
    const auto d = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            out(r, c) = m(states[static_cast<std::size_t>(r)], states[static_cast<std::size_t>(c)]);
        }
    }
    return out;
}

SectorSpectrum diagonalize(const Eigen::MatrixXd& m, std::vector<std::uint32_t> states) {
    SectorSpectrum s;
    s.states = std::move(states);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restrict(m, s.states));
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed");
    }
    s.energies = solver.eigenvalues();
    s.vectors = solver.eigenvectors();
    return s;
}

std::vector<std::uint32_t> sector_states(int n_sites, int parity) {
    std::vector<std::uint32_t> out;
    const std::uint32_t dim = 1U << n_sites;
    for (std::uint32_t s = 0; s < dim; ++s) {
        if (parity == 0 || parity_of(s) == parity) {
            out.push_back(s);
        }
    }
    return out;
}

bool conserves_parity(const SpinHamiltonian& h) {
    const auto dim = h.dimension();
    for (Eigen::Index c = 0; c < dim; ++c) {
        for (Eigen::Index r = 0; r < dim; ++r) {
            if (h.matrix(r, c) != 0.0 &&
                parity_of(static_cast<std::uint32_t>(r)) != parity_of(static_cast<std::uint32_t>(c))) {
                return false;
            }
        }
    }
    return true;
}

void check_hamiltonian(const SpinHamiltonian& h) {
    if (h.n_sites < 1 || h.n_sites > kMaxSites || h.dimension() != (Eigen::Index{1} << h.n_sites) ||
        h.matrix.cols() != h.dimension()) {
        throw ConfigError("spin Hamiltonian dimension does not match 2^n_sites");
    }
    if ((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw ConfigError("spin Hamiltonian is not Hermitian");
    }
}

void check_pair(const SpinHamiltonian& h0, const SpinHamiltonian& h1) {
    check_hamiltonian(h0);
    check_hamiltonian(h1);
    if (h0.n_sites != h1.n_sites) {
        throw ConfigError("Hamiltonians act on chains of different length");
    }
}

Eigen::VectorXd gather(const Eigen::VectorXd& full, const std::vector<std::uint32_t>& states) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = full(states[i]);
    }
    return out;
}

// Survival probability of a real state with expansion weights w_n over energies e_n.
double survival(const Eigen::VectorXd& weights, const Eigen::VectorXd& energies, double t) {
    Complex amp{0.0, 0.0};
    for (Eigen::Index n = 0; n < weights.size(); ++n) {
        amp += weights(n) * std::polar(1.0, -energies(n) * t);
    }
    return std::norm(amp);
}

Eigen::VectorXd expansion_weights(const SectorSpectrum& spectrum, const Eigen::VectorXd& state) {
    const Eigen::VectorXd c = spectrum.vectors.transpose() * state;
    Eigen::VectorXd w = c.array().square().matrix();
    if (std::abs(w.sum() - 1.0) > kNormTol) {
        throw NumericalError("evolved state lost normalization: " + std::to_string(w.sum()));
    }
    return w;
}

struct BlockSpectrum {
    int lambda;
    Eigen::VectorXd weights;
    Eigen::VectorXd energies;
};

std::vector<BlockSpectrum> block_spectra(const SpinHamiltonian& h_c, const Eigen::VectorXd& gs) {
    const BlockHamiltonian blocks = project_block_diagonal(h_c);
    std::vector<BlockSpectrum> out;
    double norm = 0.0;
    for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
        const Eigen::VectorXd part = gather(gs, blocks.states[b]);
        if (part.squaredNorm() == 0.0) {
            continue;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(blocks.blocks[b]);
        const Eigen::VectorXd c = solver.eigenvectors().transpose() * part;
        BlockSpectrum s{blocks.lambdas[b], c.array().square().matrix(), solver.eigenvalues()};
        norm += s.weights.sum();
        out.push_back(std::move(s));
    }
    if (std::abs(norm - 1.0) > kNormTol) {
        throw NumericalError("block decomposition lost normalization");
    }
    return out;
}

}  // namespace

SpinHamiltonian build_spin_hamiltonian(const ChainSpec& spec, const CouplingSpec& coupling, int branch) {
    validate(spec);
    if (spec.n_sites > kMaxSites) {
        throw SizeError("exact diagonalization is capped at " + std::to_string(kMaxSites) + " sites, got " +
                        std::to_string(spec.n_sites));
    }
    if (branch != 0 && branch != 1) {
        throw ConfigError("branch must be 0 or 1");
    }
    const int n = spec.n_sites;
    const auto g = coupling.site_strengths(n);
    const std::uint32_t dim = 1U << n;

    std::vector<std::pair<int, int>> bonds;
    for (int j = 0; j + 1 < n; ++j) {
        bonds.emplace_back(j, j + 1);
    }
    if (spec.boundary == Boundary::periodic) {
        bonds.emplace_back(n - 1, 0);
    }

    SpinHamiltonian h;
    h.n_sites = n;
    h.matrix = Eigen::MatrixXd::Zero(dim, dim);
    for (std::uint32_t s = 0; s < dim; ++s) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            diag -= (spec.lambda + branch * g[static_cast<std::size_t>(j)]) * z_value(s, j);
        }
        h.matrix(s, s) += diag;
        for (const auto& [i, j] : bonds) {
            // X_i X_j flips both spins with amplitude 1; Y_i Y_j gives -z_i z_j.
            const std::uint32_t flipped = s ^ (1U << i) ^ (1U << j);
            const double yy = -z_value(s, i) * z_value(s, j);
            h.matrix(flipped, s) -= 0.5 * (1.0 + spec.gamma) + 0.5 * (1.0 - spec.gamma) * yy;
        }
    }
    return h;
}

SpinGroundState ground_state(const SpinHamiltonian& h, ParitySector sector) {
    check_hamiltonian(h);
    std::vector<SectorSpectrum> spectra;
    if (!conserves_parity(h)) {
        if (sector != ParitySector::any) {
            throw ConfigError("Hamiltonian does not conserve parity; no sector can be selected");
        }
        spectra.push_back(diagonalize(h.matrix, sector_states(h.n_sites, 0)));
    } else {
        if (sector != ParitySector::odd) {
            spectra.push_back(diagonalize(h.matrix, sector_states(h.n_sites, 1)));
        }
        if (sector != ParitySector::even) {
            spectra.push_back(diagonalize(h.matrix, sector_states(h.n_sites, -1)));
        }
    }

    double lowest = std::numeric_limits<double>::infinity();
    const SectorSpectrum* best = nullptr;
    for (const auto& s : spectra) {
        if (s.energies.size() > 0 && s.energies(0) < lowest) {
            lowest = s.energies(0);
            best = &s;
        }
    }
    if (best == nullptr) {
        throw NumericalError("empty parity sector");
    }
    int near = 0;
    for (const auto& s : spectra) {
        for (Eigen::Index i = 0; i < s.energies.size() && s.energies(i) < lowest + kDegeneracyTol; ++i) {
            ++near;
        }
    }
    if (near > 1) {
        throw AmbiguousGroundStateError("ground state is degenerate within 1e-10; select a parity sector");
    }

    SpinGroundState gs;
    gs.energy = lowest;
    gs.vector = Eigen::VectorXd::Zero(h.dimension());
    for (std::size_t i = 0; i < best->states.size(); ++i) {
        gs.vector(best->states[i]) = best->vectors(static_cast<Eigen::Index>(i), 0);
    }
    double parity = 0.0;
    for (Eigen::Index s = 0; s < gs.vector.size(); ++s) {
        parity += gs.vector(s) * gs.vector(s) * parity_of(static_cast<std::uint32_t>(s));
    }
    gs.parity = parity >= 0.0 ? 1 : -1;
    return gs;
}

double site_magnetization(const SpinGroundState& gs, int site) {
    const auto dim = gs.vector.size();
    const int n = std::countr_zero(static_cast<std::uint64_t>(dim));
    if (site < 0 || site >= n) {
        throw ConfigError("site " + std::to_string(site) + " outside chain of " + std::to_string(n) + " sites");
    }
    double z = 0.0;
    for (Eigen::Index s = 0; s < dim; ++s) {
        z += gs.vector(s) * gs.vector(s) * z_value(static_cast<std::uint32_t>(s), site);
    }
    return z;
}

EchoSeries echo_ed(const SpinHamiltonian& h0, const SpinHamiltonian& h1, std::span<const double> times,
                   ParitySector sector) {
    check_pair(h0, h1);
    const SpinGroundState gs = ground_state(h0, sector);
    const SectorSpectrum spectrum = conserves_parity(h1)
                                        ? diagonalize(h1.matrix, sector_states(h1.n_sites, gs.parity))
                                        : diagonalize(h1.matrix, sector_states(h1.n_sites, 0));
    const Eigen::VectorXd weights = expansion_weights(spectrum, gather(gs.vector, spectrum.states));

    EchoSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.reserve(times.size());
    for (double t : times) {
        out.values.push_back(clamp_echo(survival(weights, spectrum.energies, t)));
    }
    return out;
}

EchoSeries echo_ed_general(const Eigen::VectorXcd& initial, const SpinHamiltonian& h0, const SpinHamiltonian& h1,
                           std::span<const double> times) {
    check_pair(h0, h1);
    if (initial.size() != h0.dimension()) {
        throw ConfigError("initial state dimension does not match the Hamiltonians");
    }
    if (std::abs(initial.squaredNorm() - 1.0) > kNormTol) {
        throw ConfigError("initial state is not normalized");
    }
    const auto all = sector_states(h0.n_sites, 0);
    const SectorSpectrum s0 = diagonalize(h0.matrix, all);
    const SectorSpectrum s1 = diagonalize(h1.matrix, all);
    const Eigen::VectorXcd a = s0.vectors.transpose() * initial;
    const Eigen::VectorXcd b = s1.vectors.transpose() * initial;
    const Eigen::MatrixXd overlap = s0.vectors.transpose() * s1.vectors;

    EchoSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.reserve(times.size());
    Eigen::VectorXcd evolved(b.size());
    for (double t : times) {
        for (Eigen::Index n = 0; n < b.size(); ++n) {
            evolved(n) = b(n) * std::polar(1.0, -s1.energies(n) * t);
        }
        const Eigen::VectorXcd back = overlap * evolved;
        Complex amp{0.0, 0.0};
        for (Eigen::Index m = 0; m < a.size(); ++m) {
            amp += std::conj(a(m) * std::polar(1.0, -s0.energies(m) * t)) * back(m);
        }
        out.values.push_back(clamp_echo(std::norm(amp)));
    }
    return out;
}

Eigen::MatrixXd BlockHamiltonian::to_dense() const {
    const Eigen::Index dim = Eigen::Index{1} << n_sites;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& idx = states[b];
        for (std::size_t c = 0; c < idx.size(); ++c) {
            for (std::size_t r = 0; r < idx.size(); ++r) {
                out(idx[r], idx[c]) = blocks[b](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }
    return out;
}

int total_z(std::uint32_t basis_state, int n_sites) { return n_sites - 2 * std::popcount(basis_state); }

BlockHamiltonian project_block_diagonal(const SpinHamiltonian& h_c) {
    check_hamiltonian(h_c);
    const int n = h_c.n_sites;
    std::map<int, std::vector<std::uint32_t>> by_lambda;
    const auto dim = static_cast<std::uint32_t>(h_c.dimension());
    for (std::uint32_t s = 0; s < dim; ++s) {
        by_lambda[total_z(s, n)].push_back(s);
    }

    BlockHamiltonian out;
    out.n_sites = n;
    for (auto& [lambda, states] : by_lambda) {
        if (!out.lambdas.empty() && lambda - out.lambdas.back() != 2) {
            throw NumericalError("Z_T spectrum is not evenly spaced by 2");
        }
        out.lambdas.push_back(lambda);
        out.blocks.push_back(restrict(h_c.matrix, states));
        out.states.push_back(std::move(states));
    }
    return out;
}

EchoSeries echo_strong_coupling(const SpinHamiltonian& h_c, double g, std::span<const double> times,
                                ParitySector sector) {
    const SpinGroundState gs = ground_state(h_c, sector);
    const auto spectra = block_spectra(h_c, gs.vector);

    EchoSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.reserve(times.size());
    for (double t : times) {
        Complex amp{0.0, 0.0};
        for (const auto& block : spectra) {
            Complex slow{0.0, 0.0};
            for (Eigen::Index n = 0; n < block.weights.size(); ++n) {
                slow += block.weights(n) * std::polar(1.0, -block.energies(n) * t);
            }
            amp += std::polar(1.0, g * t * block.lambda) * slow;
        }
        out.values.push_back(clamp_echo(std::norm(amp)));
    }
    return out;
}

EchoSeries strong_coupling_envelope(const SpinHamiltonian& h_c, std::span<const double> times,
                                    ParitySector sector) {
    return echo_strong_coupling(h_c, 0.0, times, sector);
}

std::vector<Eigen::Matrix2cd> reduced_qubit_dynamics(const ChainSpec& spec, const CouplingSpec& coupling,
                                                     const QubitState& qubit, std::span<const double> times,
                                                     ParitySector sector) {
    if (spec.n_sites > kMaxJointSites) {
        throw SizeError("joint qubit-chain evolution is capped at " + std::to_string(kMaxJointSites) + " sites");
    }
    const SpinHamiltonian h_c = build_spin_hamiltonian(spec, coupling, 0);
    const SpinGroundState gs = ground_state(h_c, sector);
    const auto g = coupling.site_strengths(spec.n_sites);
    const Eigen::Index chain_dim = h_c.dimension();
    const Eigen::Index dim = 2 * chain_dim;

    // Qubit is the most significant bit: index = a * 2^N + chain state.
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(dim, dim);
    joint.topLeftCorner(chain_dim, chain_dim) = h_c.matrix;
    joint.bottomRightCorner(chain_dim, chain_dim) = h_c.matrix;
    for (Eigen::Index s = 0; s < chain_dim; ++s) {
        double zt = 0.0;
        for (int j = 0; j < spec.n_sites; ++j) {
            zt += g[static_cast<std::size_t>(j)] * z_value(static_cast<std::uint32_t>(s), j);
        }
        joint(chain_dim + s, chain_dim + s) -= zt;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(joint);

    Eigen::VectorXcd psi0(dim);
    psi0.head(chain_dim) = qubit.alpha() * gs.vector.cast<Complex>();
    psi0.tail(chain_dim) = qubit.beta() * gs.vector.cast<Complex>();
    const Eigen::VectorXcd coeffs = solver.eigenvectors().transpose().cast<Complex>() * psi0;

    std::vector<Eigen::Matrix2cd> out;
    out.reserve(times.size());
    Eigen::VectorXcd phased(dim);
    for (double t : times) {
        for (Eigen::Index n = 0; n < dim; ++n) {
            phased(n) = coeffs(n) * std::polar(1.0, -solver.eigenvalues()(n) * t);
        }
        const Eigen::VectorXcd psi = solver.eigenvectors().cast<Complex>() * phased;
        const auto up = psi.head(chain_dim);
        const auto down = psi.tail(chain_dim);
        Eigen::Matrix2cd rho;
        rho(0, 0) = up.squaredNorm();
        rho(1, 1) = down.squaredNorm();
        rho(0, 1) = down.dot(up);  // sum_s psi(0,s) conj(psi(1,s))
        rho(1, 0) = std::conj(rho(0, 1));
        out.push_back(rho);
    }
    return out;
}

}  // namespace loschmidt::ed
