// Times the three parallel kernels against the serial reference paths and
// verifies the results are identical. Usage: bench [threads]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include "ctcoul/rpm.hpp"

using namespace ctcoul;

namespace {

double time_ms(const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-24s %10.1f ms %10.1f ms   x%-5.2f %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

bool same(const std::vector<Real>& x, const std::vector<Real>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i] == y[i]) || x[i].prec() != y[i].prec()) return false;
    return true;
}

} // namespace

int main(int argc, char** argv) {
    const int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
    omp_set_num_threads(threads);
    std::printf("OpenMP threads: %d\n", threads);
    std::printf("%-24s %13s %13s %8s\n", "kernel", "serial", "openmp", "speedup");

    const Rational a(1), b(-3);
    const Rational tol(1, 100000000); // 1e-8

    { // determinant sign scan over an energy grid
        const Real lo(-3.0, 160), hi(-0.01, 160), rw(1e-9, 160);
        auto run = [&](Exec e) { return hankel_roots(a, b, 0, 8, 0, lo, hi, 128, rw, e); };
        std::vector<Real> rs, rp;
        const double ts = time_ms([&] { rs = run(Exec::serial); });
        const double tp = time_ms([&] { rp = run(Exec::openmp); });
        report("determinant grid scan", ts, tp, same(rs, rp));
    }

    { // full spectrum: seeding plus branch tracking
        auto run = [&](Exec e) {
            RpmOptions opt;
            opt.precision_bits = 128;
            opt.exact_max_dim = 0;
            opt.exec = e;
            return rpm_spectrum(a, b, 0, 4, tol, opt);
        };
        RpmSpectrum ss, sp;
        const double ts = time_ms([&] { ss = run(Exec::serial); });
        const double tp = time_ms([&] { sp = run(Exec::openmp); });
        bool identical = ss.states.size() == sp.states.size();
        for (std::size_t i = 0; identical && i < ss.states.size(); ++i)
            identical = ss.states[i].converged == sp.states[i].converged &&
                        (!ss.states[i].converged ||
                         ss.states[i].energy.to_double() == sp.states[i].energy.to_double());
        report("spectrum (4 branches)", ts, tp, identical);
    }

    { // energy curve over a coupling grid
        std::vector<Rational> grid;
        for (int k = 0; k < 8; ++k) grid.push_back(Rational(-9, 2) + Rational(k, 2));
        auto run = [&](Exec e) {
            RpmOptions opt;
            opt.precision_bits = 128;
            opt.exec = e;
            return energy_curve(a, 0, 0, grid, tol, opt);
        };
        EnergyCurve cs, cp;
        const double ts = time_ms([&] { cs = run(Exec::serial); });
        const double tp = time_ms([&] { cp = run(Exec::openmp); });
        bool identical = cs.samples.size() == cp.samples.size();
        for (std::size_t i = 0; identical && i < cs.samples.size(); ++i)
            identical = cs.samples[i].converged == cp.samples[i].converged &&
                        (!cs.samples[i].converged ||
                         cs.samples[i].energy.to_double() == cp.samples[i].energy.to_double());
        report("energy curve (8 pts)", ts, tp, identical);
    }
    return 0;
}
