#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ctcoul/cli.hpp"
#include "ctcoul/errors.hpp"

namespace {

// Rationals come in as strings ("p/q" or decimals) and parse exactly after
// CLI11 is done.
struct RawArgs {
    std::string a = "1", b = "0", tol;
    std::string b_lo = "-10", b_hi = "1/2";
    std::string V1 = "1", V2 = "1", r0 = "1", mass = "1", hbar = "1";
    std::string format = "csv";
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bound states of V(r) = -a/r + b/(1+r): exactly terminating series "
                 "solutions, Hankel-determinant eigenvalues, grid cross-checks, and "
                 "figure datasets"};
    app.require_subcommand(1);
    app.fallthrough();

    ctcoul::RunConfig cfg;
    RawArgs raw;

    app.add_option("--format", raw.format, "Output format: csv, json, or svg (scan only)")
        ->capture_default_str();
    app.add_option("--output", cfg.output, "Write to this file instead of standard output");
    app.add_option("--precision-bits", cfg.precision_bits,
                   "Working precision of the determinant method (scan default: 128)")
        ->capture_default_str();
    app.add_option("--tol", raw.tol,
                   "Relative convergence tolerance, rational or decimal "
                   "(default 1e-10; scan default 1e-8)");
    app.add_option("--max-D", cfg.D_max, "Largest Hankel determinant dimension (scan default: 20)")
        ->capture_default_str();
    app.add_flag("--serial", cfg.serial, "Force the serial reference kernels");

    CLI::App* exact = app.add_subcommand(
        "exact", "Couplings b at which the degree-n series terminates, with exact energies");
    exact->add_option("--n", cfg.n, "Polynomial degree")->required();
    exact->add_option("--l", cfg.l, "Angular momentum")->capture_default_str();
    exact->add_option("--a", raw.a, "Coulomb coupling, a > 0")->capture_default_str();

    CLI::App* rpm = app.add_subcommand(
        "rpm", "Bound-state energies from Hankel determinants of the logarithmic-derivative series");
    rpm->add_option("--a", raw.a, "Coulomb coupling, a > 0")->capture_default_str();
    rpm->add_option("--b", raw.b, "Second coupling (b < a)")->capture_default_str();
    rpm->add_option("--l", cfg.l, "Angular momentum")->capture_default_str();
    rpm->add_option("--nu-max", cfg.nu_max, "Highest branch index")->capture_default_str();
    rpm->add_option("--d", cfg.d, "Hankel displacement")->capture_default_str();

    CLI::App* scan = app.add_subcommand(
        "scan", "Energy curves over a b range plus every exact-termination point inside it");
    scan->add_option("--a", raw.a, "Coulomb coupling, a > 0")->capture_default_str();
    scan->add_option("--l", cfg.l, "Angular momentum for --nu mode")->capture_default_str();
    scan->add_option("--nu", cfg.nu_list, "Branch indices at fixed l (comma separated)")
        ->delimiter(',');
    scan->add_option("--l-list", cfg.l_list, "Ground-state curves for these l (comma separated)")
        ->delimiter(',');
    scan->add_option("--b-min", raw.b_lo, "Lower end of the b range")->capture_default_str();
    scan->add_option("--b-max", raw.b_hi, "Upper end of the b range")->capture_default_str();
    scan->add_option("--steps", cfg.steps, "Grid intervals over the range")->capture_default_str();
    scan->add_option("--n-max", cfg.scan_n_max, "Termination-point sweep cap")
        ->capture_default_str();

    CLI::App* check = app.add_subcommand(
        "check", "Cross-method verification report (always JSON): determinant vs grid, "
                 "energy-derivative identity, exact-termination matches");
    check->add_option("--a", raw.a, "Coulomb coupling, a > 0")->capture_default_str();
    check->add_option("--b", raw.b, "Second coupling (b < a)")->capture_default_str();
    check->add_option("--l", cfg.l, "Angular momentum")->capture_default_str();
    check->add_option("--nu-max", cfg.nu_max, "Highest state compared")->capture_default_str();
    check->add_option("--grid-n", cfg.grid_points, "Oracle interior grid points (0 = automatic)")
        ->capture_default_str();
    check->add_option("--r-max", cfg.r_max, "Oracle box radius (0 = automatic)")
        ->capture_default_str();

    CLI::App* units = app.add_subcommand(
        "units", "Dimensionless reductions of physical potential parameters");
    units->add_option("--V1", raw.V1, "Attractive Coulomb strength")->capture_default_str();
    units->add_option("--V2", raw.V2, "Truncated-term strength")->capture_default_str();
    units->add_option("--r0", raw.r0, "Truncation length")->capture_default_str();
    units->add_option("--mass", raw.mass, "Particle mass")->capture_default_str();
    units->add_option("--hbar", raw.hbar, "Reduced Planck constant")->capture_default_str();
    units->add_option("--l", cfg.l, "Angular momentum of the reduction")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cfg.subcommand = app.get_subcommands().front()->get_name();

        if (raw.format == "csv")
            cfg.format = ctcoul::RunConfig::Format::csv;
        else if (raw.format == "json")
            cfg.format = ctcoul::RunConfig::Format::json;
        else if (raw.format == "svg")
            cfg.format = ctcoul::RunConfig::Format::svg;
        else
            throw ctcoul::DomainError("unknown format: " + raw.format);

        cfg.a = ctcoul::Rational::parse(raw.a);
        cfg.b = ctcoul::Rational::parse(raw.b);
        cfg.b_lo = ctcoul::Rational::parse(raw.b_lo);
        cfg.b_hi = ctcoul::Rational::parse(raw.b_hi);
        cfg.V1 = ctcoul::Rational::parse(raw.V1);
        cfg.V2 = ctcoul::Rational::parse(raw.V2);
        cfg.r0 = ctcoul::Rational::parse(raw.r0);
        cfg.mass = ctcoul::Rational::parse(raw.mass);
        cfg.hbar = ctcoul::Rational::parse(raw.hbar);

        // Curve scans favour throughput; single spectra favour digits.
        if (!raw.tol.empty())
            cfg.tol = ctcoul::Rational::parse(raw.tol);
        else if (cfg.subcommand == "scan")
            cfg.tol = ctcoul::Rational(1, 100000000L); // 1e-8
        if (cfg.subcommand == "scan" && app.count("--precision-bits") == 0)
            cfg.precision_bits = 128;
        if (cfg.subcommand == "scan" && app.count("--max-D") == 0) cfg.D_max = 20;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }

    return ctcoul::run_command(cfg, std::cout, std::cerr);
}
