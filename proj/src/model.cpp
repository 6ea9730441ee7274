#include "loschmidt/model.hpp"

#include "loschmidt/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace loschmidt {

namespace {
constexpr double kEchoTolerance = 1e-9;
}

void validate(const ChainSpec& spec) {
    if (spec.n_sites < 2) {
        throw ConfigError("n_sites must be at least 2, got " + std::to_string(spec.n_sites));
    }
    if (!std::isfinite(spec.gamma) || !std::isfinite(spec.lambda)) {
        throw ConfigError("gamma and lambda must be finite");
    }
}

void require_mode_engine_compatible(const ChainSpec& spec) {
    validate(spec);
    if (spec.boundary != Boundary::periodic) {
        throw ConfigError("mode engine requires periodic boundary");
    }
    if (spec.n_sites % 2 != 0) {
        throw ConfigError("mode engine requires even n_sites, got " + std::to_string(spec.n_sites));
    }
}

CouplingSpec CouplingSpec::uniform(double g) {
    if (!std::isfinite(g)) {
        throw ConfigError("coupling strength must be finite");
    }
    CouplingSpec c;
    c.uniform_ = true;
    c.g_ = g;
    return c;
}

CouplingSpec CouplingSpec::per_site(std::vector<std::pair<int, double>> sites) {
    std::set<int> seen;
    for (const auto& [site, g] : sites) {
        if (site < 0) {
            throw ConfigError("negative site index " + std::to_string(site));
        }
        if (!seen.insert(site).second) {
            throw ConfigError("duplicate coupled site " + std::to_string(site));
        }
        if (!std::isfinite(g)) {
            throw ConfigError("coupling strength must be finite");
        }
    }
    CouplingSpec c;
    c.uniform_ = false;
    c.sites_ = std::move(sites);
    return c;
}

double CouplingSpec::uniform_strength() const {
    if (!uniform_) {
        throw ConfigError("per-site coupling has no single strength");
    }
    return g_;
}

std::vector<double> CouplingSpec::site_strengths(int n_sites) const {
    validate(*this, n_sites);
    if (uniform_) {
        return std::vector<double>(static_cast<std::size_t>(n_sites), g_);
    }
    std::vector<double> out(static_cast<std::size_t>(n_sites), 0.0);
    for (const auto& [site, g] : sites_) {
        out[static_cast<std::size_t>(site)] = g;
    }
    return out;
}

void validate(const CouplingSpec& coupling, int n_sites) {
    if (coupling.is_uniform()) {
        return;
    }
    for (const auto& [site, g] : coupling.sites()) {
        if (site < 0 || site >= n_sites) {
            throw ConfigError("coupled site " + std::to_string(site) + " outside chain of " +
                              std::to_string(n_sites) + " sites");
        }
    }
}

QubitState::QubitState(std::complex<double> alpha, std::complex<double> beta) : alpha_(alpha), beta_(beta) {
    const double norm = std::norm(alpha) + std::norm(beta);
    if (std::abs(norm - 1.0) > 1e-12) {
        throw ConfigError("qubit state is not normalized: |alpha|^2 + |beta|^2 = " + std::to_string(norm));
    }
}

void validate(const EchoSeries& series) {
    if (series.times.size() != series.values.size()) {
        throw ConfigError("echo series has mismatched time and value lengths");
    }
    for (std::size_t i = 1; i < series.times.size(); ++i) {
        if (!(series.times[i] > series.times[i - 1])) {
            throw ConfigError("echo series times must be strictly increasing");
        }
    }
    for (double v : series.values) {
        if (!(v >= 0.0 && v <= 1.0 + kEchoTolerance)) {
            throw RangeError("echo value " + std::to_string(v) + " outside [0, 1]");
        }
    }
    if (!series.times.empty() && series.times.front() == 0.0 &&
        std::abs(series.values.front() - 1.0) > kEchoTolerance) {
        throw RangeError("echo must equal 1 at t = 0");
    }
}

EffectiveField effective_field(const ChainSpec& spec, const CouplingSpec& coupling) {
    return {effective_lambda(spec, coupling, 0), effective_lambda(spec, coupling, 1)};
}

double effective_lambda(const ChainSpec& spec, const CouplingSpec& coupling, int branch) {
    if (!coupling.is_uniform()) {
        throw ConfigError("per-site coupling has no single effective field");
    }
    if (branch != 0 && branch != 1) {
        throw ConfigError("branch must be 0 or 1");
    }
    return spec.lambda + branch * coupling.uniform_strength();
}

double clamp_echo(double value) {
    if (std::isnan(value) || value < -kEchoTolerance || value > 1.0 + kEchoTolerance) {
        throw RangeError("echo value " + std::to_string(value) + " outside [0, 1]");
    }
    return std::clamp(value, 0.0, 1.0);
}

double purity(const QubitState& qubit, double echo_value) {
    const double l = clamp_echo(echo_value);
    const double ab = std::abs(qubit.alpha() * qubit.beta());
    return 1.0 - 2.0 * ab * ab * (1.0 - l);
}

std::vector<double> offdiagonal_factor(const EchoSeries& series, std::complex<double> rho0_offdiag) {
    const double scale = std::abs(rho0_offdiag);
    std::vector<double> out;
    out.reserve(series.values.size());
    for (double l : series.values) {
        out.push_back(scale * std::sqrt(clamp_echo(l)));
    }
    return out;
}

std::vector<double> time_grid(double t_max, double dt) {
    if (!(dt > 0.0) || !(t_max > 0.0)) {
        throw ConfigError("time grid requires t_max > 0 and dt > 0");
    }
    const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
    std::vector<double> t(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        t[i] = static_cast<double>(i) * dt;
    }
    return t;
}

}  // namespace loschmidt
