// Timing comparison of the OpenMP kernels against their serial references:
// signature grid, reflection grid, and the cubic interaction kernel.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "mkdv/scattering.hpp"
#include "mkdv/sim.hpp"
#include "mkdv/spectral.hpp"

using namespace mkdv;
namespace chrono = std::chrono;

namespace {

template <class F>
double time_ms(F &&f, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = chrono::steady_clock::now();
        f();
        auto t1 = chrono::steady_clock::now();
        best = std::min(best, chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());

    {
        GridBounds b{-3.0, 3.0, -3.0, 3.0};
        double ts = time_ms([&] { signature_grid_serial(-6.0, b, 1200, 1201); });
        double tp = time_ms([&] { signature_grid(-6.0, b, 1200, 1201); });
        std::printf("signature_grid  1200x1201   serial %8.2f ms   omp %8.2f ms   x%.2f\n",
                    ts, tp, ts / tp);
    }

    {
        auto p = InitialProfile::from_function(
            [](double x) { return std::tanh(x) + 0.3 * std::exp(-x * x); }, -25.0, 25.0, 2501);
        auto grid = symmetric_zgrid(4.0, 24, 1e-3);
        double ts = time_ms([&] { reflection_grid_serial(p, grid); }, 2);
        double tp = time_ms([&] { reflection_grid(p, grid); }, 2);
        std::printf("reflection_grid %3zu points   serial %8.2f ms   omp %8.2f ms   x%.2f\n",
                    grid.size(), ts, tp, ts / tp);
    }

    {
        size_t n = 1 << 20;
        std::vector<double> v(n), kap(n), w(n);
        for (size_t i = 0; i < n; ++i) {
            v[i] = std::sin(1e-3 * static_cast<double>(i));
            kap[i] = std::tanh(1e-4 * (static_cast<double>(i) - 5e5));
        }
        double ts = time_ms([&] { cubic_interaction_serial(v, kap, w); }, 5);
        double tp = time_ms([&] { cubic_interaction(v, kap, w); }, 5);
        std::printf("cubic_kernel    2^20 points  serial %8.2f ms   omp %8.2f ms   x%.2f\n",
                    ts, tp, ts / tp);
    }
    return 0;
}
