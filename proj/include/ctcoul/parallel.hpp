#pragma once

namespace ctcoul {

// Execution mode for the data-parallel kernels (determinant grid scans,
// curve points, per-eigenvalue bisection). Serial is the reference
// implementation; OpenMP must produce bitwise-identical results, which the
// kernels guarantee by keeping per-index work independent and writing into
// preallocated slots (no reduction-order dependence anywhere).
enum class Exec { serial, openmp };

template <class F>
void parallel_for(int n, Exec mode, F&& body) {
    if (mode == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) body(i);
    } else {
        for (int i = 0; i < n; ++i) body(i);
    }
}

} // namespace ctcoul
