#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ctcoul/scalar.hpp"

namespace ctcoul {

// Fully resolved parameters for one batch invocation.
struct RunConfig {
    enum class Format { csv, json, svg };

    std::string subcommand; // exact | rpm | scan | check | units
    Format format = Format::csv;
    std::string output; // empty -> standard output

    Rational a{1};
    Rational b{0};
    int l = 0;
    int n = 0;      // polynomial degree (exact)
    int nu_max = 3; // highest branch index (rpm, check)
    int d = 0;      // Hankel displacement
    int D_max = 24; // determinant dimension cap
    Rational tol{1, 10000000000L};
    long precision_bits = 256;

    int grid_points = 0;    // oracle interior points; 0 = automatic (mesh <= 0.02)
    double r_max = 0.0;     // 0 -> automatic box size

    Rational b_lo{-10};
    Rational b_hi{1, 2};
    int steps = 47;           // grid intervals over [b_lo, b_hi]
    std::vector<int> nu_list; // branch scan: fixed l, these nu
    std::vector<int> l_list;  // ground-state scan: nu = 0, these l
    int scan_n_max = 8;       // termination-point sweep cap

    Rational V1{1}, V2{1}, r0{1}, mass{1}, hbar{1}; // units subcommand

    bool serial = false; // force the serial reference kernels
};

// Throws DomainError on invariant violations (tol > 0, b_lo < b_hi,
// precision >= 64 bits, non-negative indices, a > 0, ...).
void validate(const RunConfig& cfg);

// Each writes its dataset to `out` (or cfg.output) and human diagnostics to
// `err`, returning the process exit code.
int cmd_exact(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_rpm(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_units(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Validates, dispatches, and maps exceptions to exit codes: 0 success,
// 2 bad input, 3 convergence failure, 4 verification failure. JSON mode
// additionally emits a machine-readable error object.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace ctcoul
