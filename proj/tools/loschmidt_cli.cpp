#include "loschmidt/error.hpp"
#include "loschmidt/run.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

using namespace loschmidt;

namespace {

struct ChainFlags {
    int n_sites = 100;
    double gamma = 1.0;
    double lambda = 0.0;
    double g = 0.0;
    std::string coupling = "uniform";
    std::string boundary = "periodic";
    std::string engine = "modes";
    double t_max = 1.5;
    std::optional<double> dt;
    std::string out;
    std::vector<std::string> fit;
    double peak_threshold = envelope::kInverseE;
    std::string window;
    int jobs = 1;
};

void add_chain_flags(CLI::App& cmd, ChainFlags& f, bool with_fit) {
    cmd.add_option("--n-sites", f.n_sites, "Chain length N")->capture_default_str();
    cmd.add_option("--gamma", f.gamma, "Anisotropy")->capture_default_str();
    cmd.add_option("--lambda", f.lambda, "Transverse field")->capture_default_str();
    cmd.add_option("--g", f.g, "Qubit-chain coupling")->capture_default_str();
    cmd.add_option("--coupling", f.coupling, "uniform or site:<j>[,<j>...]")->capture_default_str();
    cmd.add_option("--boundary", f.boundary, "periodic or open")
        ->check(CLI::IsMember({"periodic", "open"}))
        ->capture_default_str();
    cmd.add_option("--engine", f.engine, "modes, quadratic, ed, strong_coupling or short_time")
        ->check(CLI::IsMember({"modes", "quadratic", "ed", "strong_coupling", "short_time"}))
        ->capture_default_str();
    cmd.add_option("--t-max", f.t_max, "Final time")->capture_default_str();
    cmd.add_option("--dt", f.dt, "Time step (default min(5e-4, pi/(16(2g+4))))");
    cmd.add_option("--out", f.out, "Output file (stdout when omitted)");
    cmd.add_option("--jobs", f.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    if (with_fit) {
        cmd.add_option("--fit", f.fit, "gaussian and/or powerlaw")->delimiter(',');
        cmd.add_option("--peak-threshold", f.peak_threshold, "Gaussian fits use peaks above this value")
            ->capture_default_str();
        cmd.add_option("--window", f.window, "Power-law window t0:t1");
    }
}

CouplingSpec parse_coupling(const std::string& text, double g) {
    if (text == "uniform") {
        return CouplingSpec::uniform(g);
    }
    if (text.rfind("site:", 0) != 0) {
        throw ConfigError("coupling must be 'uniform' or 'site:<j>', got '" + text + "'");
    }
    std::vector<std::pair<int, double>> sites;
    std::stringstream ss(text.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int j = std::stoi(item, &used);
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
            sites.emplace_back(j, g);
        } catch (const std::exception&) {
            throw ConfigError("invalid site index '" + item + "'");
        }
    }
    return CouplingSpec::per_site(std::move(sites));
}

run::FitOptions to_fit_options(const ChainFlags& f) {
    run::FitOptions opts;
    for (const auto& name : f.fit) {
        opts.models.push_back(run::parse_fit_model(name));
    }
    opts.peak_threshold = f.peak_threshold;
    if (!f.window.empty()) {
        opts.window = run::parse_window(f.window);
    }
    return opts;
}

run::RunConfig to_config(const ChainFlags& f) {
    run::RunConfig c;
    c.spec.n_sites = f.n_sites;
    c.spec.gamma = f.gamma;
    c.spec.lambda = f.lambda;
    c.spec.boundary = f.boundary == "open" ? Boundary::open : Boundary::periodic;
    c.coupling = parse_coupling(f.coupling, f.g);
    c.engine = run::parse_engine(f.engine);
    c.t_max = f.t_max;
    c.dt = f.dt;
    c.out = f.out;
    c.fit = to_fit_options(f);
    c.jobs = static_cast<unsigned>(f.jobs);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loschmidt echo of a qubit coupled to an XY spin chain"};
    app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
    app.require_subcommand(1);

    ChainFlags echo_flags;
    auto* echo = app.add_subcommand("echo", "Compute one echo series L(t)");
    add_chain_flags(*echo, echo_flags, true);

    ChainFlags sweep_flags;
    std::vector<std::string> axes;
    auto* sweep = app.add_subcommand("sweep", "Fit the envelope over a parameter grid");
    add_chain_flags(*sweep, sweep_flags, true);
    sweep->add_option("--axis", axes, "Grid axis name=v1,v2,... (g, lambda, gamma, n); repeatable")->required();

    ChainFlags fit_flags;
    std::string input;
    auto* fit = app.add_subcommand("fit", "Fit the envelope of a t,L file");
    fit->add_option("--in", input, "Input CSV with header t,L")->required()->check(CLI::ExistingFile);
    fit->add_option("--n-sites", fit_flags.n_sites, "Chain length N used in the Gaussian scaling")
        ->capture_default_str();
    fit->add_option("--g", fit_flags.g, "Coupling of the run; sets the fast period pi/g");
    fit->add_option("--fit", fit_flags.fit, "gaussian and/or powerlaw")->delimiter(',');
    fit->add_option("--peak-threshold", fit_flags.peak_threshold, "Gaussian fits use peaks above this value")
        ->capture_default_str();
    fit->add_option("--window", fit_flags.window, "Power-law window t0:t1");
    fit->add_option("--out", fit_flags.out, "Report file (stdout when omitted)");

    int n_max = 10;
    std::uint64_t seed = 1;
    int cases = 24;
    int validate_jobs = 1;
    std::string validate_out;
    auto* validate = app.add_subcommand("validate", "Randomized cross-engine comparison");
    validate->add_option("--n-max", n_max, "Largest chain length")->capture_default_str();
    validate->add_option("--seed", seed, "Random seed")->capture_default_str();
    validate->add_option("--cases", cases, "Number of random configurations")->capture_default_str();
    validate->add_option("--jobs", validate_jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    validate->add_option("--out", validate_out, "Report file (stdout when omitted)");

    ChainFlags purity_flags;
    double alpha = 1.0 / std::sqrt(2.0);
    double beta = 1.0 / std::sqrt(2.0);
    auto* purity_cmd = app.add_subcommand("purity", "Echo and qubit purity for the state alpha|0> + beta|1>");
    add_chain_flags(*purity_cmd, purity_flags, false);
    purity_cmd->add_option("--alpha", alpha, "Amplitude of |0>")->capture_default_str();
    purity_cmd->add_option("--beta", beta, "Amplitude of |1>")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*echo) {
            run::cmd_echo(to_config(echo_flags), std::cout, std::cerr);
        } else if (*sweep) {
            run::SweepConfig sc;
            sc.base = to_config(sweep_flags);
            sc.jobs = sc.base.jobs;
            for (const auto& a : axes) {
                run::add_axis(sc, a);
            }
            run::cmd_sweep(sc, std::cout, std::cerr);
        } else if (*fit) {
            run::FitOptions opts = to_fit_options(fit_flags);
            if (fit_flags.g > 0.0) {
                opts.g = fit_flags.g;
            }
            run::cmd_fit(input, fit_flags.n_sites, opts, fit_flags.out, std::cout);
        } else if (*validate) {
            const auto report = run::run_validation(n_max, seed, cases, static_cast<unsigned>(validate_jobs));
            if (validate_out.empty()) {
                run::write_validation(std::cout, report);
            } else {
                std::ofstream out(validate_out);
                run::write_validation(out, report);
            }
            if (!report.passed()) {
                std::cerr << "validation failed: a deviation exceeds its tolerance\n";
                return 3;
            }
        } else if (*purity_cmd) {
            run::cmd_purity(to_config(purity_flags), QubitState(alpha, beta), std::cout);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
