#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "mkdv/types.hpp"

namespace mkdv {

// Dormand-Prince 5(4) embedded pair over a fixed-size complex state vector.
// Integrates in either direction (x1 < x0 allowed).  Rhs signature:
//   void rhs(double x, const State&, State&)
template <size_t N>
struct Dopri5 {
    using State = std::array<cdouble, N>;

    double atol = 1e-11;
    double rtol = 1e-11;
    double hmax = 1.0;
    size_t max_steps = 40'000'000;

    template <class Rhs>
    State integrate(Rhs &&rhs, double x0, double x1, State y) const {
        double dir = (x1 >= x0) ? 1.0 : -1.0;
        double span = std::abs(x1 - x0);
        if (span == 0.0) return y;
        double h = dir * std::min(hmax, std::max(1e-8, span / 100.0));
        double x = x0;
        State k1, k2, k3, k4, k5, k6, k7, ytmp, y5;
        rhs(x, y, k1);
        size_t steps = 0;
        bool last = false;
        while (!last) {
            if (++steps > max_steps)
                throw NumericalError("Dopri5: step limit exceeded");
            if (std::abs(h) > std::abs(x1 - x)) {
                h = x1 - x;
                last = true;
            }

            stage(rhs, x, y, h, k1, k2, k3, k4, k5, k6, k7, ytmp, y5);

            // embedded error estimate
            double err = 0.0, scale_norm = 0.0;
            for (size_t i = 0; i < N; ++i) {
                cdouble e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                 e6 * k6[i] + e7 * k7[i]);
                double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err += std::norm(e / sc);
                scale_norm += 1.0;
            }
            err = std::sqrt(err / scale_norm);

            if (err <= 1.0) {
                x += h;
                y = y5;
                k1 = k7;  // FSAL
            } else {
                last = false;
            }
            double fac = 0.9 * std::pow(std::max(err, 1e-300), -0.2);
            fac = std::clamp(fac, 0.2, 5.0);
            h *= fac;
            if (std::abs(h) > hmax) h = dir * hmax;
            if (err > 1.0 && std::abs(h) < 1e-14 * (1.0 + std::abs(x)))
                throw NumericalError("Dopri5: step size collapsed at x=" + std::to_string(x));
            if (last && err > 1.0) last = false;
        }
        return y;
    }

    // Integrate while landing exactly on every node of `xs` (monotone sequence);
    // `emit(i, x, y)` is called at each node including the first.
    template <class Rhs, class Emit>
    void integrate_nodes(Rhs &&rhs, const std::vector<double> &xs, State y, Emit &&emit) const {
        if (xs.empty()) return;
        emit(size_t{0}, xs[0], y);
        for (size_t i = 1; i < xs.size(); ++i) {
            y = integrate(rhs, xs[i - 1], xs[i], y);
            emit(i, xs[i], y);
        }
    }

   private:
    // Butcher tableau (Dormand-Prince)
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    // b - b* (error weights)
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600;
    static constexpr double e3 = 500.0 / 1113 - 7571.0 / 16695;
    static constexpr double e4 = 125.0 / 192 - 393.0 / 640;
    static constexpr double e5 = -2187.0 / 6784 + 92097.0 / 339200;
    static constexpr double e6 = 11.0 / 84 - 187.0 / 2100;
    static constexpr double e7 = -1.0 / 40;

    template <class Rhs>
    void stage(Rhs &&rhs, double x, const State &y, double h, const State &k1, State &k2,
               State &k3, State &k4, State &k5, State &k6, State &k7, State &ytmp,
               State &y5) const {
        for (size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a21 * k1[i]);
        rhs(x + c2 * h, ytmp, k2);
        for (size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(x + c3 * h, ytmp, k3);
        for (size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(x + c4 * h, ytmp, k4);
        for (size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(x + c5 * h, ytmp, k5);
        for (size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        rhs(x + h, ytmp, k6);
        for (size_t i = 0; i < N; ++i)
            y5[i] = y[i] +
                    h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(x + h, y5, k7);
    }
};

// Classic fixed-step RK4, the serial reference integrator used by tests to
// cross-check the adaptive path.
template <size_t N, class Rhs>
std::array<cdouble, N> rk4_fixed(Rhs &&rhs, double x0, double x1,
                                 std::array<cdouble, N> y, size_t nsteps) {
    using State = std::array<cdouble, N>;
    double h = (x1 - x0) / static_cast<double>(nsteps);
    State k1, k2, k3, k4, ytmp;
    double x = x0;
    for (size_t n = 0; n < nsteps; ++n) {
        rhs(x, y, k1);
        for (size_t i = 0; i < N; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(x + 0.5 * h, ytmp, k2);
        for (size_t i = 0; i < N; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(x + 0.5 * h, ytmp, k3);
        for (size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * k3[i];
        rhs(x + h, ytmp, k4);
        for (size_t i = 0; i < N; ++i)
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        x += h;
    }
    return y;
}

}  // namespace mkdv
