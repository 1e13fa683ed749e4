#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace padicfrob::cli;

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg, std::vector<long>& primes, long& precision) {
    cmd->add_option("--prime,-p", primes, "odd prime (repeatable)");
    cmd->add_option("--order,-N", cfg.order, "truncation order in q")->capture_default_str();
    cmd->add_option("--precision,-G", precision, "Gamma precision G (default: automatic)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic Frobenius structures of quantum connections"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::vector<long> primes;
    long precision = 0;
    std::string window;
    std::string path;

    auto* gamma = app.add_subcommand("gamma", "derivatives of the p-adic Gamma function at 0");
    gamma->add_option("--prime,-p", primes, "odd prime (repeatable)");
    gamma->add_option("--k-max", cfg.k_max, "highest derivative")->capture_default_str();
    gamma->add_option("--precision,-G", precision, "target err_val (default 10)");

    auto* profile = app.add_subcommand("profile", "valuation profile CSV and growth-rate fit");
    add_common(profile, cfg, primes, precision);
    profile->add_option("--connection,-c", cfg.connection, "built-in name or connection file")->required();
    profile->add_option("--out,-o", cfg.out, "output directory")->capture_default_str();
    profile->add_option("--window", window, "fit window lo:hi (default 20:60)");

    auto* newton = app.add_subcommand("newton", "Newton polygon of det(zI - Phi(pi theta)) and Betti check");
    add_common(newton, cfg, primes, precision);
    newton->add_option("--connection,-c", cfg.connection, "built-in name or connection file")->required();
    newton->add_flag("--theta-report", cfg.theta_report, "print val(phi_k(pi theta)) for every k");

    auto* satake = app.add_subcommand("satake", "Grassmannian exterior-power cross-check");
    add_common(satake, cfg, primes, precision);
    satake->add_option("--k", cfg.k, "subspace dimension")->capture_default_str();
    satake->add_option("--n", cfg.N, "ambient dimension N")->capture_default_str();
    satake->add_option("--out,-o", cfg.out, "directory for the generated connection file");
    satake->add_flag("--theta-report", cfg.theta_report, "print val(phi_k(pi theta)) for every k");

    app.add_subcommand("list", "built-in connections");

    auto* validate = app.add_subcommand("validate", "check a connection file");
    validate->add_option("path", path, "connection file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    if (!primes.empty()) cfg.primes = primes;
    if (precision != 0) cfg.precision = precision;
    if (!window.empty()) {
        const auto colon = window.find(':');
        try {
            if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
            cfg.window_lo = std::stoul(window.substr(0, colon));
            cfg.window_hi = std::stoul(window.substr(colon + 1));
        } catch (const std::exception&) {
            std::cerr << "error: --window expects lo:hi\n";
            return kUsage;
        }
    }

    try {
        if (*gamma) return cmd_gamma(cfg, std::cout, std::cerr);
        if (*profile) return cmd_profile(cfg, std::cout, std::cerr);
        if (*newton) return cmd_newton(cfg, std::cout, std::cerr);
        if (*satake) {
            if (satake->count("--order") == 0) cfg.order = 20;
            return cmd_satake(cfg, std::cout, std::cerr);
        }
        if (app.got_subcommand("list")) return cmd_list(std::cout);
        if (*validate) return cmd_validate(path, std::cout, std::cerr);
    } catch (const padicfrob::PrecisionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kPrecision;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
