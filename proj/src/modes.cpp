#include "loschmidt/modes.hpp"

#include "loschmidt/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace loschmidt::modes {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogSwitch = 1e-12;
constexpr double kContributing = 1e-12;

double momentum(int k, int n_sites) { return 2.0 * kPi * k / n_sites; }

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
    return a <= -kPi ? a + 2.0 * kPi : a;
}

// sin^2(dphi) for the unpaired momenta q = 0 and q = pi, where the pairing term vanishes.
double unpaired_weight(double lambda0, double lambda1, double cos_q) {
    const double d0 = lambda0 + cos_q;
    const double d1 = lambda1 + cos_q;
    if (d0 == 0.0 || d1 == 0.0) {
        return 0.0;
    }
    const double s = std::sin(std::atan2(0.0, d1) - std::atan2(0.0, d0));
    return s * s;
}

void check_weights(const ModeTable& table, double& weight_sum) {
    weight_sum = 0.0;
    for (double d : table.delta_phi) {
        const double s = std::sin(d);
        weight_sum += s * s;
    }
    if (!(weight_sum > 0.0)) {
        throw UndefinedPeakError("all mixing weights sin^2(dphi) vanish; peak energy undefined");
    }
}

}  // namespace

double bogoliubov_angle(double gamma, double lambda_eff, int k, int n_sites) {
    if (n_sites <= 0 || k < 0 || k >= n_sites) {
        throw ConfigError("momentum index " + std::to_string(k) + " outside [0, " + std::to_string(n_sites) + ")");
    }
    const double q = momentum(k, n_sites);
    const double num = gamma * std::sin(q);
    const double den = lambda_eff + std::cos(q);
    if (num == 0.0 && den == 0.0) {
        throw DegenerateModeError("Bogoliubov angle undefined at k = " + std::to_string(k) +
                                  " (gapless mode with vanishing pairing)");
    }
    return std::atan2(num, den);
}

double mode_energy(double gamma, double lambda_eff, int k, int n_sites) {
    if (n_sites <= 0 || k < 0 || k >= n_sites) {
        throw ConfigError("momentum index " + std::to_string(k) + " outside [0, " + std::to_string(n_sites) + ")");
    }
    const double q = momentum(k, n_sites);
    return 2.0 * std::hypot(gamma * std::sin(q), lambda_eff + std::cos(q));
}

ModeTable build_mode_table(const ChainSpec& spec, double g) {
    require_mode_engine_compatible(spec);
    const int n = spec.n_sites;
    const double lambda0 = spec.lambda;
    const double lambda1 = spec.lambda + g;

    ModeTable table;
    table.n_sites = n;
    table.singular_limit = spec.gamma == 0.0;
    const auto count = static_cast<std::size_t>(n / 2 - 1);
    table.k.reserve(count);
    for (int k = 1; k < n / 2; ++k) {
        table.k.push_back(k);
        table.energy0.push_back(mode_energy(spec.gamma, lambda0, k, n));
        table.energy1.push_back(mode_energy(spec.gamma, lambda1, k, n));
        if (table.singular_limit) {
            // Both branches are diagonal in the same basis; dphi is 0 or pi.
            table.phi0.push_back(0.0);
            table.phi1.push_back(0.0);
            table.delta_phi.push_back(0.0);
            continue;
        }
        const double p0 = bogoliubov_angle(spec.gamma, lambda0, k, n);
        const double p1 = bogoliubov_angle(spec.gamma, lambda1, k, n);
        table.phi0.push_back(p0);
        table.phi1.push_back(p1);
        table.delta_phi.push_back(wrap_angle(p1 - p0));
    }

    // q = 0 and q = pi carry no pairing: their occupations are conserved and the
    // corresponding echo factors are exactly one.
    if (g > 0.0 && lambda0 >= 0.0) {
        const double w = unpaired_weight(lambda0, lambda1, 1.0) + unpaired_weight(lambda0, lambda1, -1.0);
        if (w > 1e-24) {
            throw NumericalError("unpaired momenta acquired a nonzero mixing weight");
        }
    }
    return table;
}

ModeTable build_mode_table(const ChainSpec& spec, const CouplingSpec& coupling) {
    if (!coupling.is_uniform()) {
        throw ConfigError("mode engine requires uniform coupling");
    }
    return build_mode_table(spec, coupling.uniform_strength());
}

EchoSeries echo_product(const ModeTable& table, std::span<const double> times) {
    EchoSeries out;
    out.times.assign(times.begin(), times.end());
    out.values.assign(times.size(), 1.0);
    out.singular_limit = table.singular_limit;
    if (table.singular_limit) {
        return out;
    }

    std::vector<double> weights(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double s = std::sin(table.delta_phi[i]);
        weights[i] = s * s;
    }

    for (std::size_t t = 0; t < times.size(); ++t) {
        double product = 1.0;
        double log_sum = 0.0;
        bool use_log = false;
        for (std::size_t i = 0; i < table.size(); ++i) {
            const double s = std::sin(table.energy1[i] * times[t]);
            const double factor = 1.0 - weights[i] * s * s;
            if (!use_log && factor < kLogSwitch) {
                use_log = true;
                log_sum = std::log(product);
            }
            if (use_log) {
                log_sum += std::log(std::max(factor, 0.0));
            } else {
                product *= factor;
            }
        }
        out.values[t] = clamp_echo(use_log ? std::exp(log_sum) : product);
    }
    return out;
}

double analytic_peak_energy(const ModeTable& table) {
    double weight_sum = 0.0;
    check_weights(table, weight_sum);
    double acc = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double s = std::sin(table.delta_phi[i]);
        acc += s * s * table.energy1[i];
    }
    return acc / weight_sum;
}

double analytic_alpha(const ModeTable& table) {
    const double e = analytic_peak_energy(table);
    double acc = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double s = std::sin(table.delta_phi[i]);
        const double d = table.energy1[i] - e;
        acc += s * s * d * d;
    }
    return 4.0 * acc / table.n_sites;
}

ApproximateAlpha dispersion_alpha_variant(const ModeTable& table) {
    double weight_sum = 0.0;
    check_weights(table, weight_sum);
    double mean = 0.0;
    int contributing = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double s = std::sin(table.delta_phi[i]);
        if (s * s > kContributing) {
            mean += table.energy1[i];
            ++contributing;
        }
    }
    mean /= contributing;
    double acc = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double s = std::sin(table.delta_phi[i]);
        const double d = table.energy1[i] - mean;
        acc += s * s * d * d;
    }
    return {4.0 * acc / table.n_sites, true};
}

}  // namespace loschmidt::modes
