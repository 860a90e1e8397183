#include "mkdv/painleve.hpp"

#include <algorithm>
#include <cmath>

#include "mkdv/airy.hpp"
#include "mkdv/ode.hpp"

namespace mkdv {

namespace {

struct PiiRhs {
    void operator()(double s, const std::array<cdouble, 3> &y,
                    std::array<cdouble, 3> &dy) const {
        // y = (u, u', I);  I' = -u^2 so that I(s) = int_s^inf u^2 along
        // decreasing s.
        dy[0] = y[1];
        dy[1] = 2.0 * y[0] * y[0] * y[0] + s * y[0];
        dy[2] = -y[0] * y[0];
    }
};

size_t locate(const std::vector<double> &sdesc, double sq) {
    // descending grid; find i with s[i] >= sq >= s[i+1]
    auto it = std::lower_bound(sdesc.begin(), sdesc.end(), sq, std::greater<double>());
    size_t i = static_cast<size_t>(it - sdesc.begin());
    if (i == 0) return 0;
    if (i >= sdesc.size()) return sdesc.size() - 2;
    return i - 1;
}

double hermite(double s0, double s1, double f0, double f1, double d0, double d1, double sq) {
    double h = s1 - s0;
    double t = (sq - s0) / h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 +
           (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * d1;
}

}  // namespace

double PIISolution::u_at(double sq) const {
    if (!in_range(sq)) throw std::domain_error("PIISolution: s outside solution grid");
    size_t i = locate(s, sq);
    return hermite(s[i], s[i + 1], u[i], u[i + 1], up[i], up[i + 1], sq);
}

double PIISolution::up_at(double sq) const {
    if (!in_range(sq)) throw std::domain_error("PIISolution: s outside solution grid");
    size_t i = locate(s, sq);
    // derivative data for u' comes from the ODE: u'' = 2u^3 + s u
    double dd0 = 2.0 * u[i] * u[i] * u[i] + s[i] * u[i];
    double dd1 = 2.0 * u[i + 1] * u[i + 1] * u[i + 1] + s[i + 1] * u[i + 1];
    return hermite(s[i], s[i + 1], up[i], up[i + 1], dd0, dd1, sq);
}

double PIISolution::I_at(double sq) const {
    if (!in_range(sq)) throw std::domain_error("PIISolution: s outside solution grid");
    size_t i = locate(s, sq);
    double d0 = -u[i] * u[i], d1 = -u[i + 1] * u[i + 1];
    return hermite(s[i], s[i + 1], I[i], I[i + 1], d0, d1, sq);
}

PIISolution solve_pii(const PIIConfig &config) {
    if (!(config.p >= 0.0 && config.p <= 1.0))
        throw std::domain_error("solve_pii: p must lie in [0, 1]");
    if (!(config.s_start >= 6.0))
        throw std::domain_error("solve_pii: s_start must be >= 6");
    if (!(config.s_min < config.s_start))
        throw std::domain_error("solve_pii: s_min must be below s_start");

    PIISolution sol;
    sol.p = config.p;
    sol.hastings_mcleod_flag = config.p >= 1.0 - 1e-6;

    size_t n = static_cast<size_t>(std::ceil((config.s_start - config.s_min) / config.ds)) + 1;
    sol.s.resize(n);
    for (size_t i = 0; i < n; ++i)
        sol.s[i] = config.s_start - static_cast<double>(i) * config.ds;
    sol.u.resize(n);
    sol.up.resize(n);
    sol.I.resize(n);

    auto a0 = airy_ai(config.s_start);
    std::array<cdouble, 3> y{-config.p * a0.Ai, -config.p * a0.Aip,
                             config.p * config.p * (a0.Aip * a0.Aip - config.s_start * a0.Ai * a0.Ai)};

    Dopri5<3> ode;
    ode.atol = config.atol;
    ode.rtol = config.rtol;
    ode.hmax = 0.05;
    try {
        ode.integrate_nodes(PiiRhs{}, sol.s, y,
                            [&](size_t i, double, const std::array<cdouble, 3> &yi) {
                                sol.u[i] = yi[0].real();
                                sol.up[i] = yi[1].real();
                                sol.I[i] = yi[2].real();
                            });
    } catch (const NumericalError &e) {
        throw NumericalError(std::string("solve_pii: pole encountered during backward "
                                         "integration: ") +
                             e.what());
    }
    return sol;
}

Matrix2c pii_m1(const PIISolution &sol, double s) {
    double u = sol.u_at(s);
    double I = sol.I_at(s);
    cdouble ihalf(0, 0.5);
    return {{-ihalf * I, 0.5 * u, 0.5 * u, ihalf * I}};
}

}  // namespace mkdv
