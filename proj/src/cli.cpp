#include "ctcoul/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ctcoul/errors.hpp"
#include "ctcoul/frobenius.hpp"
#include "ctcoul/io.hpp"
#include "ctcoul/model.hpp"
#include "ctcoul/oracle.hpp"
#include "ctcoul/rpm.hpp"

namespace ctcoul {
namespace {

using ordered_json = nlohmann::ordered_json;

const char* format_name(RunConfig::Format f) {
    switch (f) {
        case RunConfig::Format::csv: return "csv";
        case RunConfig::Format::json: return "json";
        default: return "svg";
    }
}

RpmOptions rpm_options(const RunConfig& cfg) {
    RpmOptions opt;
    opt.precision_bits = static_cast<mpfr_prec_t>(cfg.precision_bits);
    opt.max_dim = cfg.D_max;
    opt.displacement = cfg.d;
    opt.start_dim = std::min(opt.start_dim, std::max(2, cfg.D_max - 1));
    opt.exec = cfg.serial ? Exec::serial : Exec::openmp;
    return opt;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) throw DomainError("cannot open output file: " + cfg.output);
    f << text;
}

// Scalars in JSON: decimal string always, exact "p/q" alongside when the
// value is rational.
void put_scalar(ordered_json& obj, const std::string& key, const Scalar& s) {
    obj[key] = format_decimal(s);
    if (s.is_rational()) obj[key + "_exact"] = s.rat().str();
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json c;
    c["subcommand"] = cfg.subcommand;
    c["format"] = format_name(cfg.format);
    if (cfg.subcommand == "units") {
        c["V1"] = cfg.V1.str();
        c["V2"] = cfg.V2.str();
        c["r0"] = cfg.r0.str();
        c["mass"] = cfg.mass.str();
        c["hbar"] = cfg.hbar.str();
        c["l"] = cfg.l;
        return c;
    }
    c["a"] = cfg.a.str();
    if (cfg.subcommand == "rpm" || cfg.subcommand == "check") c["b"] = cfg.b.str();
    c["l"] = cfg.l;
    if (cfg.subcommand == "exact") c["n"] = cfg.n;
    if (cfg.subcommand == "rpm" || cfg.subcommand == "check") c["nu_max"] = cfg.nu_max;
    if (cfg.subcommand != "exact") {
        c["d"] = cfg.d;
        c["D_max"] = cfg.D_max;
        c["tol"] = cfg.tol.str();
    }
    c["precision_bits"] = cfg.precision_bits;
    if (cfg.subcommand == "check") {
        if (cfg.grid_points > 0)
            c["grid_points"] = cfg.grid_points;
        else
            c["grid_points"] = "auto";
        c["r_max"] = cfg.r_max == 0.0 ? std::string("auto") : format_decimal(cfg.r_max);
        c["scan_n_max"] = cfg.scan_n_max;
    }
    if (cfg.subcommand == "scan") {
        c["b_lo"] = cfg.b_lo.str();
        c["b_hi"] = cfg.b_hi.str();
        c["steps"] = cfg.steps;
        c["nu_list"] = cfg.nu_list;
        c["l_list"] = cfg.l_list;
        c["scan_n_max"] = cfg.scan_n_max;
    }
    c["serial"] = cfg.serial;
    return c;
}

void require_tabular(const RunConfig& cfg) {
    if (cfg.format == RunConfig::Format::svg)
        throw DomainError("svg output is only available for scan");
}

// ---------------------------------------------------------------- svg

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string render_svg(const RunConfig& cfg, const std::vector<EnergyCurve>& curves,
                       const std::vector<TerminationSolution>& points) {
    const double W = 840, H = 600, L = 80, R = 810, T = 50, B = 540;
    double xmin = cfg.b_lo.to_double(), xmax = cfg.b_hi.to_double();
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const EnergyCurve& c : curves)
        for (const CurveSample& s : c.samples)
            if (s.converged) {
                ymin = std::min(ymin, s.energy.to_double());
                ymax = std::max(ymax, s.energy.to_double());
            }
    for (const TerminationSolution& p : points) {
        ymin = std::min(ymin, p.energy.to_double());
        ymax = std::max(ymax, p.energy.to_double());
    }
    if (!(ymin < ymax)) {
        ymin = -1.0;
        ymax = 0.0;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto mx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (R - L); };
    auto my = [&](double y) { return B - (y - ymin) / (ymax - ymin) * (B - T); };

    static const char* palette[6] = {"#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
                                     "#8c564b", "#17becf"};
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << " " << H
      << "\" font-family=\"monospace\" font-size=\"12\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << px((L + R) / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << "E(b) branches and exact-termination points (a = " << cfg.a.str() << ")</text>\n";

    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        s << "<line x1=\"" << px(mx(xv)) << "\" y1=\"" << px(T) << "\" x2=\"" << px(mx(xv))
          << "\" y2=\"" << px(B) << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        s << "<line x1=\"" << px(L) << "\" y1=\"" << px(my(yv)) << "\" x2=\"" << px(R)
          << "\" y2=\"" << px(my(yv)) << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        s << "<text x=\"" << px(mx(xv)) << "\" y=\"" << px(B + 18)
          << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
        s << "<text x=\"" << px(L - 8) << "\" y=\"" << px(my(yv) + 4)
          << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
    }
    s << "<rect x=\"" << px(L) << "\" y=\"" << px(T) << "\" width=\"" << px(R - L)
      << "\" height=\"" << px(B - T) << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << px((L + R) / 2) << "\" y=\"" << px(H - 12)
      << "\" text-anchor=\"middle\">b</text>\n";
    s << "<text x=\"20\" y=\"" << px((T + B) / 2) << "\">E</text>\n";

    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const EnergyCurve& c = curves[ci];
        const char* color = palette[ci % 6];
        std::string seg;
        int seg_len = 0;
        auto flush = [&]() {
            if (seg_len >= 2)
                s << "<polyline fill=\"none\" stroke=\"" << color
                  << "\" stroke-width=\"1.5\" points=\"" << seg << "\"/>\n";
            seg.clear();
            seg_len = 0;
        };
        for (const CurveSample& smp : c.samples) {
            if (!smp.converged) {
                flush(); // leave a visible gap where the solver failed
                continue;
            }
            if (!seg.empty()) seg += ' ';
            seg += px(mx(smp.b.to_double())) + "," + px(my(smp.energy.to_double()));
            ++seg_len;
        }
        flush();
        s << "<text x=\"" << px(R - 150) << "\" y=\"" << px(T + 18 + 16 * static_cast<double>(ci))
          << "\" fill=\"" << color << "\">l=" << c.l << " nu=" << c.nu << "</text>\n";
    }
    for (const TerminationSolution& p : points)
        s << "<circle cx=\"" << px(mx(p.b_root.to_double())) << "\" cy=\""
          << px(my(p.energy.to_double()))
          << "\" r=\"4\" fill=\"#d62728\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    s << "</svg>\n";
    return s.str();
}

} // namespace

void validate(const RunConfig& cfg) {
    if (cfg.tol.sign() <= 0) throw DomainError("tol must be positive");
    if (!(cfg.b_lo < cfg.b_hi)) throw DomainError("b range must satisfy lo < hi");
    if (cfg.precision_bits < 64) throw DomainError("precision must be at least 64 bits");
    if (cfg.n < 0) throw DomainError("n must be non-negative");
    if (cfg.l < 0) throw DomainError("l must be non-negative");
    if (cfg.nu_max < 0) throw DomainError("nu-max must be non-negative");
    if (cfg.d < 0) throw DomainError("d must be non-negative");
    if (cfg.D_max < 2) throw DomainError("max determinant dimension must be at least 2");
    if (cfg.subcommand != "units" && cfg.a.sign() <= 0) throw DomainError("a must be positive");
    for (int nu : cfg.nu_list)
        if (nu < 0) throw DomainError("branch indices must be non-negative");
    for (int l : cfg.l_list)
        if (l < 0) throw DomainError("angular momenta must be non-negative");
    if (cfg.scan_n_max < 0) throw DomainError("n-max must be non-negative");
    if (cfg.steps < 1) throw DomainError("steps must be at least 1");
    if (cfg.grid_points != 0 && cfg.grid_points < 3)
        throw DomainError("the oracle grid needs at least 3 interior points (or 0 for automatic)");
    if (cfg.r_max < 0.0) throw DomainError("r-max must be positive (or 0 for automatic)");
}

int cmd_exact(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_tabular(cfg);
    ConditionalSweep sweep =
        conditional_solutions(cfg.n, cfg.l, cfg.a, static_cast<mpfr_prec_t>(cfg.precision_bits));

    if (cfg.format == RunConfig::Format::csv) {
        CsvTable t;
        t.header = {"n", "i", "l", "b", "alpha", "E", "nu"};
        for (int j = 0; j <= cfg.n; ++j) t.header.push_back("c" + std::to_string(j));
        for (const TerminationSolution& s : sweep.solutions) {
            std::vector<std::string> row = {std::to_string(s.n),      std::to_string(s.i),
                                            std::to_string(s.l),      format_decimal(s.b_root),
                                            format_decimal(s.alpha),  format_decimal(s.energy),
                                            std::to_string(s.nu)};
            for (int j = 0; j <= cfg.n; ++j) row.push_back(format_decimal(s.poly.coeff(j)));
            t.rows.push_back(std::move(row));
        }
        emit(cfg, t.str(), out);
    } else {
        ordered_json root;
        root["schema_version"] = 1;
        root["config"] = config_json(cfg);
        ordered_json rows = ordered_json::array();
        for (const TerminationSolution& s : sweep.solutions) {
            ordered_json r;
            r["n"] = s.n;
            r["i"] = s.i;
            r["l"] = s.l;
            put_scalar(r, "b", s.b_root);
            put_scalar(r, "alpha", s.alpha);
            put_scalar(r, "E", s.energy);
            r["nu"] = s.nu;
            r["multiplicity"] = s.multiplicity;
            ordered_json poly = ordered_json::array();
            ordered_json poly_exact = ordered_json::array();
            bool all_rational = true;
            for (int j = 0; j <= s.poly.degree(); ++j) {
                Scalar c = s.poly.coeff(j);
                poly.push_back(format_decimal(c));
                if (c.is_rational())
                    poly_exact.push_back(c.rat().str());
                else
                    all_rational = false;
            }
            r["poly"] = poly;
            if (all_rational) r["poly_exact"] = poly_exact;
            rows.push_back(std::move(r));
        }
        root["rows"] = rows;
        emit(cfg, root.dump(2) + "\n", out);
    }

    if (sweep.nonreal_root_count > 0)
        err << "note: " << sweep.nonreal_root_count
            << " complex root(s) of the termination polynomial ignored\n";
    if (sweep.nonbound_root_count > 0)
        err << "warning: " << sweep.nonbound_root_count
            << " real root(s) with b >= a skipped (no bound terminating state)\n";
    return 0;
}

int cmd_rpm(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_tabular(cfg);
    RpmSpectrum sp = rpm_spectrum(cfg.a, cfg.b, cfg.l, cfg.nu_max + 1, cfg.tol, rpm_options(cfg));
    bool all_ok = true;

    if (cfg.format == RunConfig::Format::csv) {
        CsvTable t;
        t.header = {"nu", "E", "D", "residual", "converged"};
        for (const RpmEigenvalue& st : sp.states) {
            all_ok = all_ok && st.converged;
            t.rows.push_back({std::to_string(st.nu),
                              st.converged ? format_decimal(st.energy) : std::string(),
                              std::to_string(st.final_dim), format_decimal(st.residual),
                              st.converged ? "1" : "0"});
        }
        emit(cfg, t.str(), out);
    } else {
        ordered_json root;
        root["schema_version"] = 1;
        root["config"] = config_json(cfg);
        ordered_json rows = ordered_json::array();
        for (const RpmEigenvalue& st : sp.states) {
            all_ok = all_ok && st.converged;
            ordered_json r;
            r["nu"] = st.nu;
            if (st.converged)
                put_scalar(r, "E", st.energy);
            else
                r["E"] = nullptr;
            r["exact"] = st.exact;
            r["D"] = st.final_dim;
            r["residual"] = format_decimal(st.residual);
            r["converged"] = st.converged;
            if (!st.note.empty()) r["note"] = st.note;
            rows.push_back(std::move(r));
        }
        root["rows"] = rows;
        emit(cfg, root.dump(2) + "\n", out);
    }
    if (!sp.diagnostics.empty()) err << "rpm: " << sp.diagnostics << "\n";
    return all_ok ? 0 : 3;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const bool branch_mode = !cfg.nu_list.empty();
    const bool ground_mode = !cfg.l_list.empty();
    if (branch_mode == ground_mode)
        throw DomainError(
            "scan: give exactly one of --nu (branches at fixed l) or --l-list (ground state per l)");
    if (!(cfg.b_hi < cfg.a))
        throw DomainError("scan: the b range must stay below a (bound-state regime)");

    std::vector<std::pair<int, int>> branches; // (l, nu)
    if (branch_mode)
        for (int nu : cfg.nu_list) branches.emplace_back(cfg.l, nu);
    else
        for (int l : cfg.l_list) branches.emplace_back(l, 0);

    std::vector<Rational> grid;
    grid.reserve(static_cast<std::size_t>(cfg.steps) + 1);
    const Rational span = cfg.b_hi - cfg.b_lo;
    for (int k = 0; k <= cfg.steps; ++k)
        grid.push_back(cfg.b_lo + span * Rational(k, cfg.steps));

    const RpmOptions opt = rpm_options(cfg);
    std::vector<EnergyCurve> curves;
    for (auto [l, nu] : branches) curves.push_back(energy_curve(cfg.a, l, nu, grid, cfg.tol, opt));

    std::vector<int> ls;
    for (auto [l, nu] : branches) ls.push_back(l);
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());

    std::vector<TerminationSolution> points;
    for (int l : ls)
        for (int n = 0; n <= cfg.scan_n_max; ++n) {
            ConditionalSweep sweep =
                conditional_solutions(n, l, cfg.a, static_cast<mpfr_prec_t>(cfg.precision_bits));
            for (TerminationSolution& s : sweep.solutions) {
                bool inside;
                if (s.b_root.is_rational()) {
                    const Rational& br = s.b_root.rat();
                    inside = !(br < cfg.b_lo) && !(cfg.b_hi < br);
                } else {
                    const Real& br = s.b_root.real();
                    inside = !(br < Real(cfg.b_lo, br.prec())) && !(Real(cfg.b_hi, br.prec()) < br);
                }
                if (inside) points.push_back(std::move(s));
            }
        }

    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        int gaps = 0;
        for (const CurveSample& s : curves[ci].samples)
            if (!s.converged) ++gaps;
        if (gaps > 0)
            err << "warning: branch l=" << curves[ci].l << " nu=" << curves[ci].nu << ": " << gaps
                << " of " << curves[ci].samples.size() << " samples did not converge\n";
        if (curves[ci].monotone_violations > 0)
            err << "warning: branch l=" << curves[ci].l << " nu=" << curves[ci].nu << ": "
                << curves[ci].monotone_violations << " monotonicity violation(s) along b\n";
    }

    if (cfg.format == RunConfig::Format::csv) {
        CsvTable t;
        t.header = {"kind", "l", "nu", "n", "i", "b", "E"};
        for (const EnergyCurve& c : curves)
            for (const CurveSample& s : c.samples) {
                if (!s.converged) continue; // gap; already reported above
                t.rows.push_back({"curve", std::to_string(c.l), std::to_string(c.nu), "", "",
                                  format_decimal(Scalar(s.b)), format_decimal(s.energy)});
            }
        for (const TerminationSolution& p : points)
            t.rows.push_back({"point", std::to_string(p.l), std::to_string(p.nu),
                              std::to_string(p.n), std::to_string(p.i), format_decimal(p.b_root),
                              format_decimal(p.energy)});
        emit(cfg, t.str(), out);
    } else if (cfg.format == RunConfig::Format::json) {
        ordered_json root;
        root["schema_version"] = 1;
        root["config"] = config_json(cfg);
        ordered_json rows = ordered_json::array();
        for (const EnergyCurve& c : curves)
            for (const CurveSample& s : c.samples) {
                ordered_json r;
                r["kind"] = "curve";
                r["l"] = c.l;
                r["nu"] = c.nu;
                r["n"] = nullptr;
                r["i"] = nullptr;
                put_scalar(r, "b", Scalar(s.b));
                if (s.converged)
                    put_scalar(r, "E", s.energy);
                else
                    r["E"] = nullptr;
                r["converged"] = s.converged;
                rows.push_back(std::move(r));
            }
        for (const TerminationSolution& p : points) {
            ordered_json r;
            r["kind"] = "point";
            r["l"] = p.l;
            r["nu"] = p.nu;
            r["n"] = p.n;
            r["i"] = p.i;
            put_scalar(r, "b", p.b_root);
            put_scalar(r, "E", p.energy);
            rows.push_back(std::move(r));
        }
        root["rows"] = rows;
        emit(cfg, root.dump(2) + "\n", out);
    } else {
        emit(cfg, render_svg(cfg, curves, points), out);
    }
    return 0;
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const int count = cfg.nu_max + 1;
    const RpmOptions opt = rpm_options(cfg);
    const double thr_oracle = 1e-6, thr_closed = 1e-9, thr_hf = 1e-4, thr_term = 1e-9;

    ordered_json root;
    root["schema_version"] = 1;
    root["config"] = config_json(cfg);
    root["thresholds"] = {{"rpm_vs_oracle", format_decimal(thr_oracle)},
                          {"closed_form", format_decimal(thr_closed)},
                          {"hellmann_feynman", format_decimal(thr_hf)},
                          {"termination", format_decimal(thr_term)}};
    ordered_json rows = ordered_json::array();
    bool all_pass = true;
    auto add = [&](ordered_json r, bool pass) {
        r["status"] = pass ? "pass" : "fail";
        all_pass = all_pass && pass;
        rows.push_back(std::move(r));
    };

    RpmSpectrum sp = rpm_spectrum(cfg.a, cfg.b, cfg.l, count, cfg.tol, opt);
    const double box =
        cfg.r_max > 0.0 ? cfg.r_max : default_grid(cfg.a, cfg.b, cfg.l, count).r_max;
    const RadialGrid grid(box, cfg.grid_points > 0 ? cfg.grid_points : default_points(box));
    FdResult fd = fd_spectrum(cfg.a, cfg.b, cfg.l, count, grid);
    if (!fd.warning.empty()) err << "check: " << fd.warning << "\n";

    for (int nu = 0; nu < count; ++nu) {
        const RpmEigenvalue& st = sp.states[static_cast<std::size_t>(nu)];
        ordered_json r;
        r["check"] = "rpm_vs_oracle";
        r["nu"] = nu;
        bool ok = false;
        if (!st.converged) {
            r["note"] = "determinant method did not converge";
        } else if (nu >= static_cast<int>(fd.states.size())) {
            put_scalar(r, "E_rpm", st.energy);
            r["note"] = "grid oracle holds fewer bound states";
        } else {
            const double e_fd = fd.states[static_cast<std::size_t>(nu)].energy;
            const double delta = std::fabs(st.energy.to_double() - e_fd);
            put_scalar(r, "E_rpm", st.energy);
            r["E_oracle"] = format_decimal(e_fd);
            r["delta"] = format_decimal(delta);
            ok = delta <= thr_oracle;
        }
        add(std::move(r), ok);
    }

    if (cfg.b.is_zero()) {
        for (int nu = 0; nu < count; ++nu) {
            const RpmEigenvalue& st = sp.states[static_cast<std::size_t>(nu)];
            const Rational e_cf = coulomb_energy(nu, cfg.l, cfg.a);
            ordered_json r;
            r["check"] = "closed_form";
            r["nu"] = nu;
            r["E_closed_form"] = e_cf.str();
            bool ok = false;
            if (st.converged) {
                put_scalar(r, "E_rpm", st.energy);
                if (st.energy.is_rational() && st.energy.rat() == e_cf) {
                    r["delta"] = "0";
                    ok = true;
                } else {
                    const double delta = std::fabs(st.energy.to_double() - e_cf.to_double());
                    r["delta"] = format_decimal(delta);
                    ok = delta <= thr_closed;
                }
            } else {
                r["note"] = "determinant method did not converge";
            }
            add(std::move(r), ok);
        }
    }

    {
        ordered_json r;
        r["check"] = "hellmann_feynman";
        r["nu"] = 0;
        bool ok = false;
        try {
            HellmannFeynmanReport hf = hellmann_feynman_check(cfg.a, cfg.b, cfg.l, 0, 1e-4, opt);
            r["dE_db"] = format_decimal(hf.derivative);
            r["expectation"] = format_decimal(hf.expectation);
            r["discrepancy"] = format_decimal(hf.discrepancy);
            ok = hf.discrepancy <= thr_hf && hf.derivative > 0.0 && hf.expectation > 0.0 &&
                 hf.expectation < 1.0;
        } catch (const std::exception& ex) {
            r["note"] = std::string("derivative probe failed: ") + ex.what();
        }
        add(std::move(r), ok);
    }

    for (int n = 0; n <= cfg.scan_n_max; ++n) {
        ConditionalSweep sweep =
            conditional_solutions(n, cfg.l, cfg.a, static_cast<mpfr_prec_t>(cfg.precision_bits));
        for (const TerminationSolution& s : sweep.solutions) {
            if (!s.b_root.is_rational() || !(s.b_root.rat() == cfg.b)) continue;
            if (s.nu > cfg.nu_max) continue;
            const RpmEigenvalue& st = sp.states[static_cast<std::size_t>(s.nu)];
            ordered_json r;
            r["check"] = "termination_match";
            r["n"] = s.n;
            r["i"] = s.i;
            r["nu"] = s.nu;
            r["E_exact"] = s.energy.rat().str();
            bool ok = false;
            if (!st.converged) {
                r["note"] = "determinant method did not converge";
            } else if (st.energy.is_rational() && st.energy.rat() == s.energy.rat()) {
                put_scalar(r, "E_rpm", st.energy);
                r["delta"] = "0";
                r["exact"] = true;
                ok = true;
            } else {
                const double delta = std::fabs(st.energy.to_double() - s.energy.to_double());
                put_scalar(r, "E_rpm", st.energy);
                r["delta"] = format_decimal(delta);
                r["exact"] = false;
                ok = delta <= thr_term;
            }
            add(std::move(r), ok);
        }
    }

    root["rows"] = rows;
    root["result"] = all_pass ? "pass" : "fail";
    emit(cfg, root.dump(2) + "\n", out);
    return all_pass ? 0 : 4;
}

int cmd_units(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_tabular(cfg);
    (void)err;
    PhysicalParams p(cfg.V1, cfg.V2, cfg.r0, cfg.mass, cfg.hbar);
    const CaseIReduction ci = to_case_i(p, cfg.l);
    const CaseIIReduction cii = to_case_ii(p);

    struct Row {
        const char* case_name;
        const char* name;
        Rational value;
        std::string error;
    };
    std::vector<Row> table = {
        {"I", "a", ci.params.a, {}},
        {"I", "b", ci.params.b, {}},
        {"I", "energy_unit", ci.energy_unit, {}},
        {"II", "coupling", cii.coupling, {}},
        {"II", "scaled_r0", cii.scaled_r0, {}},
        {"II", "energy_unit", cii.energy_unit, {}},
    };
    try {
        const CaseIIIReduction ciii = to_case_iii(p);
        table.push_back({"III", "ratio", ciii.ratio, {}});
        table.push_back({"III", "scaled_r0", ciii.scaled_r0, {}});
        table.push_back({"III", "energy_unit", ciii.energy_unit, {}});
    } catch (const DomainError& ex) {
        table.push_back({"III", "error", Rational(0), ex.what()});
    }

    if (cfg.format == RunConfig::Format::csv) {
        CsvTable t;
        t.header = {"case", "name", "value", "value_exact"};
        for (const Row& r : table) {
            if (!r.error.empty())
                t.rows.push_back({r.case_name, r.name, r.error, ""});
            else
                t.rows.push_back({r.case_name, r.name, format_decimal(r.value.to_double()),
                                  r.value.str()});
        }
        emit(cfg, t.str(), out);
    } else {
        ordered_json root;
        root["schema_version"] = 1;
        root["config"] = config_json(cfg);
        ordered_json rows = ordered_json::array();
        for (const Row& r : table) {
            ordered_json j;
            j["case"] = r.case_name;
            j["name"] = r.name;
            if (!r.error.empty()) {
                j["error"] = r.error;
            } else {
                j["value"] = format_decimal(r.value.to_double());
                j["value_exact"] = r.value.str();
            }
            rows.push_back(std::move(j));
        }
        root["rows"] = rows;
        emit(cfg, root.dump(2) + "\n", out);
    }
    return 0;
}

namespace {

void report_error(const RunConfig& cfg, const char* type, const std::string& message,
                  std::ostream& out, std::ostream& err) {
    if (cfg.format == RunConfig::Format::json) {
        ordered_json e;
        e["schema_version"] = 1;
        e["error"] = {{"type", type}, {"message", message}};
        out << e.dump(2) << "\n";
    }
    err << "error: " << message << "\n";
}

} // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
        if (cfg.subcommand == "exact") return cmd_exact(cfg, out, err);
        if (cfg.subcommand == "rpm") return cmd_rpm(cfg, out, err);
        if (cfg.subcommand == "scan") return cmd_scan(cfg, out, err);
        if (cfg.subcommand == "check") return cmd_check(cfg, out, err);
        if (cfg.subcommand == "units") return cmd_units(cfg, out, err);
        throw DomainError("unknown subcommand: " + cfg.subcommand);
    } catch (const ConvergenceError& ex) {
        report_error(cfg, "convergence_failure", ex.what(), out, err);
        return 3;
    } catch (const std::exception& ex) {
        report_error(cfg, "invalid_parameters", ex.what(), out, err);
        return 2;
    }
}

} // namespace ctcoul
