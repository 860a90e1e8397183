#include "mkdv/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "mkdv/ode.hpp"
#include "mkdv/spectral.hpp"

namespace mkdv {

namespace {

// mu' = ik sigma3 mu + Q mu - i lambda mu sigma3, written entrywise:
//   mu11' = (i/z)  mu11 + q mu21        mu12' = iz mu12 + q mu22
//   mu21' = -iz    mu21 + q mu11        mu22' = (-i/z) mu22 + q mu12
// Columns decouple, so a 2-vector RHS per column is enough.
struct ColumnRhs {
    const InitialProfile &profile;
    cdouble iz;      // i z        (column growth rate, col 2)
    cdouble izinv;   // i / z      (col 1)

    void operator()(double x, const std::array<cdouble, 2> &y,
                    std::array<cdouble, 2> &dy) const {
        double q = profile.q_at(x);
        dy[0] = izinv * y[0] + q * y[1];
        dy[1] = -iz * y[1] + q * y[0];
    }
};

struct Column2Rhs {
    const InitialProfile &profile;
    cdouble iz;
    cdouble izinv;

    void operator()(double x, const std::array<cdouble, 2> &y,
                    std::array<cdouble, 2> &dy) const {
        double q = profile.q_at(x);
        dy[0] = iz * y[0] + q * y[1];
        dy[1] = -izinv * y[1] + q * y[0];
    }
};

std::array<cdouble, 2> boundary_column(cdouble z, int side, int col) {
    cdouble izinv = cdouble(0, 1) / z;
    if (col == 1) return {1.0, (side > 0 ? -izinv : izinv)};
    return {(side > 0 ? izinv : -izinv), 1.0};
}

constexpr double kJostAtol = 1e-12;
constexpr double kJostRtol = 1e-11;

Dopri5<2> make_jost_integrator() {
    Dopri5<2> ode;
    ode.atol = kJostAtol;
    ode.rtol = kJostRtol;
    ode.hmax = 0.25;
    return ode;
}

// Integrate one mu column from the truncated endpoint to x_target.
std::array<cdouble, 2> mu_column_at(const InitialProfile &profile, cdouble z, int side,
                                    int col, double x_target) {
    auto [xl, xr] = profile.support(profile.trunc_tol());
    double x_from = (side > 0) ? std::max(xr, x_target) : std::min(xl, x_target);
    ColumnRhs rhs1{profile, cdouble(0, 1) * z, cdouble(0, 1) / z};
    Column2Rhs rhs2{profile, cdouble(0, 1) * z, cdouble(0, 1) / z};
    auto ode = make_jost_integrator();
    auto y0 = boundary_column(z, side, col);
    if (col == 1) return ode.integrate(rhs1, x_from, x_target, y0);
    return ode.integrate(rhs2, x_from, x_target, y0);
}

}  // namespace

Matrix2c jost_boundary_matrix(cdouble z, int side) {
    cdouble izinv = cdouble(0, 1) / z;
    if (side > 0) return {{1.0, izinv, -izinv, 1.0}};
    return {{1.0, -izinv, izinv, 1.0}};
}

JostPair jost_solutions(const InitialProfile &profile, cdouble z) {
    if (z == cdouble(0.0)) throw std::domain_error("jost_solutions: z = 0 excluded");
    if (z.imag() < -1e-14)
        throw std::domain_error("jost_solutions: z must be real or in the closed upper half-plane");
    bool zreal = std::abs(z.imag()) <= 1e-14;

    JostPair jp;
    jp.z = z;
    jp.x = profile.x();
    size_t n = jp.x.size();
    jp.mu_plus.assign(n, jost_boundary_matrix(z, +1));
    jp.mu_minus.assign(n, jost_boundary_matrix(z, -1));

    auto ode = make_jost_integrator();
    ColumnRhs rhs1{profile, cdouble(0, 1) * z, cdouble(0, 1) / z};
    Column2Rhs rhs2{profile, cdouble(0, 1) * z, cdouble(0, 1) / z};

    std::vector<double> fwd(jp.x.begin(), jp.x.end());
    std::vector<double> bwd(jp.x.rbegin(), jp.x.rend());

    // mu-: integrate upward from the left end.  Column 2 is the C+-analytic
    // one; column 1 only on the real axis.
    ode.integrate_nodes(rhs2, fwd, boundary_column(z, -1, 2),
                        [&](size_t i, double, const std::array<cdouble, 2> &y) {
                            jp.mu_minus[i](0, 1) = y[0];
                            jp.mu_minus[i](1, 1) = y[1];
                        });
    if (zreal)
        ode.integrate_nodes(rhs1, fwd, boundary_column(z, -1, 1),
                            [&](size_t i, double, const std::array<cdouble, 2> &y) {
                                jp.mu_minus[i](0, 0) = y[0];
                                jp.mu_minus[i](1, 0) = y[1];
                            });

    // mu+: integrate downward from the right end.  Column 1 is analytic in C+.
    ode.integrate_nodes(rhs1, bwd, boundary_column(z, +1, 1),
                        [&](size_t i, double, const std::array<cdouble, 2> &y) {
                            jp.mu_plus[n - 1 - i](0, 0) = y[0];
                            jp.mu_plus[n - 1 - i](1, 0) = y[1];
                        });
    if (zreal)
        ode.integrate_nodes(rhs2, bwd, boundary_column(z, +1, 2),
                            [&](size_t i, double, const std::array<cdouble, 2> &y) {
                                jp.mu_plus[n - 1 - i](0, 1) = y[0];
                                jp.mu_plus[n - 1 - i](1, 1) = y[1];
                            });
    return jp;
}

namespace {

// Phi columns at x0 for the Wronskian formulas, with the e^{i lambda x sigma3}
// factors restored.  col 1 carries e^{+i lambda x}, col 2 carries e^{-i lambda x}.
struct PhiColumns {
    std::array<cdouble, 2> phi_plus_1, phi_minus_2, phi_minus_1, phi_plus_2;
};

PhiColumns phi_columns_at(const InitialProfile &profile, cdouble z, double x0, bool need_real) {
    auto lam = uniformize(z).lambda;
    cdouble ep = std::exp(cdouble(0, 1) * lam * x0);
    cdouble em = 1.0 / ep;
    PhiColumns pc;
    auto mp1 = mu_column_at(profile, z, +1, 1, x0);
    auto mm2 = mu_column_at(profile, z, -1, 2, x0);
    pc.phi_plus_1 = {mp1[0] * ep, mp1[1] * ep};
    pc.phi_minus_2 = {mm2[0] * em, mm2[1] * em};
    if (need_real) {
        auto mm1 = mu_column_at(profile, z, -1, 1, x0);
        auto mp2 = mu_column_at(profile, z, +1, 2, x0);
        pc.phi_minus_1 = {mm1[0] * ep, mm1[1] * ep};
        pc.phi_plus_2 = {mp2[0] * em, mp2[1] * em};
    }
    return pc;
}

cdouble det2(const std::array<cdouble, 2> &u, const std::array<cdouble, 2> &v) {
    return u[0] * v[1] - u[1] * v[0];
}

}  // namespace

ScatteringAB scattering_ab(const InitialProfile &profile, double z, std::optional<double> x0) {
    if (z == 0.0 || z == 1.0 || z == -1.0)
        throw std::domain_error("scattering_ab: z in {0,+-1} excluded (use reflection_at_one)");
    auto [xl, xr] = profile.support(profile.trunc_tol());
    double xm = x0.value_or(0.5 * (xl + xr));
    auto pc = phi_columns_at(profile, z, xm, true);
    cdouble denom = 1.0 - 1.0 / (cdouble(z) * z);
    return {det2(pc.phi_plus_1, pc.phi_minus_2) / denom,
            det2(pc.phi_minus_1, pc.phi_plus_1) / denom};
}

cdouble scattering_a(const InitialProfile &profile, cdouble z) {
    if (z == cdouble(0.0)) throw std::domain_error("scattering_a: z = 0 excluded");
    if (z.imag() < -1e-14)
        throw std::domain_error("scattering_a: Im z >= 0 required");
    auto [xl, xr] = profile.support(profile.trunc_tol());
    double xm = 0.5 * (xl + xr);
    auto pc = phi_columns_at(profile, z, xm, false);
    cdouble denom = 1.0 - 1.0 / (z * z);
    return det2(pc.phi_plus_1, pc.phi_minus_2) / denom;
}

std::vector<cdouble> reflection_grid(const InitialProfile &profile,
                                     const std::vector<double> &zgrid, double margin) {
    for (double z : zgrid)
        if (std::abs(z) < margin || std::abs(z - 1.0) < margin || std::abs(z + 1.0) < margin)
            throw ValidationError("reflection_grid: grid point within margin of {0,+-1}: z=" +
                                  std::to_string(z));
    std::vector<cdouble> r(zgrid.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(zgrid.size()); ++i) {
        auto ab = scattering_ab(profile, zgrid[i]);
        r[i] = ab.b / ab.a;
    }
    return r;
}

std::vector<cdouble> reflection_grid_serial(const InitialProfile &profile,
                                            const std::vector<double> &zgrid, double margin) {
    for (double z : zgrid)
        if (std::abs(z) < margin || std::abs(z - 1.0) < margin || std::abs(z + 1.0) < margin)
            throw ValidationError("reflection_grid: grid point within margin of {0,+-1}: z=" +
                                  std::to_string(z));
    std::vector<cdouble> r(zgrid.size());
    for (size_t i = 0; i < zgrid.size(); ++i) {
        auto ab = scattering_ab(profile, zgrid[i]);
        r[i] = ab.b / ab.a;
    }
    return r;
}

ReflectionResult reflection_at_one(const InitialProfile &profile, double h0,
                                   double tol_generic) {
    // Neville extrapolation of r(1-h) and r(1+h) to h = 0 over a dyadic ladder.
    // r varies on the scale |a(1)(z-1)| ~ 0.1 near the singular point, so the
    // ladder starts small.
    constexpr int kLevels = 4;
    std::array<double, kLevels> hs{};
    for (int i = 0; i < kLevels; ++i) hs[i] = h0 / std::pow(2.0, i);

    ReflectionResult res;
    auto extrapolate = [&](int side) {
        std::array<cdouble, kLevels> t{};
        for (int i = 0; i < kLevels; ++i) {
            auto ab = scattering_ab(profile, 1.0 + side * hs[i]);
            t[i] = ab.b / ab.a;
            res.history.push_back(t[i]);
        }
        // polynomial in h through (hs[i], t[i]) evaluated at h=0
        std::array<cdouble, kLevels> p = t;
        for (int j = 1; j < kLevels; ++j)
            for (int i = 0; i + j < kLevels; ++i)
                p[i] = (hs[i + j] * p[i] - hs[i] * p[i + 1]) / (hs[i + j] - hs[i]);
        return p[0];
    };

    cdouble from_below = extrapolate(-1);
    cdouble from_above = extrapolate(+1);
    if (std::abs(from_below - from_above) > 0.05 * (1.0 + std::abs(from_below)))
        throw NumericalError("reflection_at_one: two-sided extrapolations disagree: " +
                             std::to_string(std::abs(from_below - from_above)));
    res.r1 = 0.5 * (from_below + from_above);
    res.generic = std::abs(res.r1) > 1.0 - tol_generic;
    return res;
}

std::vector<double> scan_circle_roots(const std::function<double(double)> &f, int samples,
                                      double tol) {
    std::vector<double> roots;
    double a0 = 1e-4, a1 = PI - 1e-4;
    std::vector<double> alphas(samples + 1), vals(samples + 1);
    for (int i = 0; i <= samples; ++i) alphas[i] = a0 + (a1 - a0) * i / samples;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i <= samples; ++i) vals[i] = f(alphas[i]);
    for (int i = 1; i <= samples; ++i) {
        double alpha = alphas[i], val = vals[i];
        double prev = vals[i - 1], prev_alpha = alphas[i - 1];
        if (prev == 0.0) roots.push_back(prev_alpha);
        else if (prev * val < 0.0) {
            // bisection + secant refinement
            double lo = prev_alpha, hi = alpha, flo = prev, fhi = val;
            for (int it = 0; it < 200 && hi - lo > tol; ++it) {
                double mid;
                // secant guess, fall back to bisection when outside bracket
                mid = hi - fhi * (hi - lo) / (fhi - flo);
                if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
                double fm = f(mid);
                if (fm == 0.0) { lo = hi = mid; break; }
                if (flo * fm < 0.0) { hi = mid; fhi = fm; }
                else { lo = mid; flo = fm; }
            }
            roots.push_back(0.5 * (lo + hi));
        }
    }
    return roots;
}

DiscreteSpectrum discrete_spectrum(const InitialProfile &profile,
                                   const DiscreteSpectrumOptions &opts) {
    // On |z| = 1 the inversion symmetry forces a(z) into iR, so the scan
    // tracks the real function Im a(e^{i alpha}).
    auto f = [&](double alpha) { return scattering_a(profile, std::polar(1.0, alpha)).imag(); };
    auto roots = scan_circle_roots(f, opts.scan_samples, opts.root_tol);

    DiscreteSpectrum ds;
    for (double alpha : roots) {
        cdouble eta = std::polar(1.0, alpha);
        bool self_sym = std::abs(alpha - PI / 2.0) < 1e-7;  // eta = i, counted once

        // a'(eta): central differences along the tangent and the normal of the
        // circle, averaged.
        double d = opts.derivative_step;
        cdouble tangent_dir = cdouble(0, 1) * eta;
        cdouble ap_t = (scattering_a(profile, eta * std::polar(1.0, d)) -
                        scattering_a(profile, eta * std::polar(1.0, -d))) /
                       (2.0 * d * tangent_dir);
        cdouble ap_n = (scattering_a(profile, eta * (1.0 + d)) -
                        scattering_a(profile, eta * (1.0 - d))) /
                       (2.0 * d * eta);
        cdouble ap = 0.5 * (ap_t + ap_n);
        if (std::abs(ap) < 1e-4)
            throw NumericalError("discrete_spectrum: a'(eta) ~ 0, zero not simple");

        // Connection coefficient Phi+_1 = gamma Phi-_2, read off at mid-grid.
        auto jp = jost_solutions(profile, eta);
        auto lam = uniformize(eta).lambda;
        const auto &xs = jp.x;
        size_t mid = xs.size() / 2;
        cdouble ep_mid = std::exp(cdouble(0, 1) * lam * xs[mid]);
        cdouble gamma = (jp.mu_plus[mid](0, 0) * ep_mid) /
                        (jp.mu_minus[mid](0, 1) / ep_mid);

        // Norming constant c = 2 eta / int |Phi-_2|^2 dx.  Each half of the
        // integral uses the column that decays there (Phi-_2 to the left,
        // Phi+_1/gamma to the right); past the matching point the directly
        // integrated column is contaminated by the neutral mode blown up by
        // the e^{-i lambda x} factor.
        std::vector<double> integrand(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) {
            cdouble ph = std::exp(cdouble(0, 1) * lam * xs[i]);
            if (i <= mid) {
                cdouble p0 = jp.mu_minus[i](0, 1) / ph;
                cdouble p1 = jp.mu_minus[i](1, 1) / ph;
                integrand[i] = std::norm(p0) + std::norm(p1);
            } else {
                cdouble p0 = jp.mu_plus[i](0, 0) * ph / gamma;
                cdouble p1 = jp.mu_plus[i](1, 0) * ph / gamma;
                integrand[i] = std::norm(p0) + std::norm(p1);
            }
        }
        double norm2 = 0.0;
        for (size_t i = 0; i + 1 < xs.size(); ++i)
            norm2 += 0.5 * (integrand[i] + integrand[i + 1]) * (xs[i + 1] - xs[i]);
        cdouble c = 2.0 * eta / norm2;

        ds.eta.push_back(eta);
        ds.c.push_back(c);
        ds.gamma.push_back(gamma);
        ds.a_prime.push_back(ap);
        ds.self_symmetric.push_back(self_sym);
    }
    return ds;
}

cdouble evolution_factor(cdouble z, double t) {
    auto [lambda, k] = uniformize(z);
    return std::exp(2.0 * cdouble(0, 1) * lambda * (4.0 * k * k + 2.0) * t);
}

ScatteringData evolve_scattering(const ScatteringData &data, double t) {
    if (t < 0.0) throw std::domain_error("evolve_scattering: t >= 0 required");
    ScatteringData out = data;
    out.time = data.time + t;
    for (size_t i = 0; i < out.grid.size(); ++i)
        out.r[i] = data.r[i] * evolution_factor(cdouble(data.grid[i]), t);
    for (size_t n = 0; n < out.poles.eta.size(); ++n) {
        cdouble f = evolution_factor(out.poles.eta[n], t);
        out.poles.c[n] = data.poles.c[n] * f;
        out.poles.gamma[n] = data.poles.gamma[n] * f;
    }
    return out;
}

SymmetryReport validate_symmetries(const ScatteringData &data, double tol) {
    SymmetryReport rep;
    rep.tol = tol;
    const auto &g = data.grid;
    auto find = [&](double z) -> std::optional<size_t> {
        // grid is sorted; binary search with relative tolerance
        auto it = std::lower_bound(g.begin(), g.end(), z - 1e-9 * (1.0 + std::abs(z)));
        if (it != g.end() && std::abs(*it - z) < 1e-8 * (1.0 + std::abs(z)))
            return static_cast<size_t>(it - g.begin());
        return std::nullopt;
    };
    for (size_t i = 0; i < g.size(); ++i) {
        auto j = find(-g[i]);
        if (!j) throw ValidationError("validate_symmetries: grid not closed under z -> -z");
        double d1 = std::abs(data.r[i] - std::conj(data.r[*j]));
        rep.max_conj_negation = std::max(rep.max_conj_negation, d1);
        if (d1 > tol) rep.flagged.push_back(i);

        auto k = find(1.0 / g[i]);
        if (!k) throw ValidationError("validate_symmetries: grid not closed under z -> 1/z");
        double d2 = std::abs(data.r[i] + std::conj(data.r[*k]));
        rep.max_inversion = std::max(rep.max_inversion, d2);
        if (d2 > tol && (rep.flagged.empty() || rep.flagged.back() != i))
            rep.flagged.push_back(i);
    }
    rep.pass = rep.max_conj_negation <= tol && rep.max_inversion <= tol;
    return rep;
}

std::vector<double> symmetric_zgrid(double zmax, int n_per_side, double margin) {
    if (zmax <= 1.0) throw std::domain_error("symmetric_zgrid: zmax > 1 required");
    double W = std::log(zmax);
    std::vector<double> g;
    g.reserve(4 * n_per_side);
    // exp-spaced w in [-W, W] is closed under inversion by construction; make
    // the w set symmetric about 0 and skip |z-1| < margin (w ~ margin).
    for (int i = 0; i < n_per_side; ++i) {
        double w = -W + 2.0 * W * i / (n_per_side - 1);
        double z = std::exp(w);
        if (std::abs(z - 1.0) < margin || std::abs(z + 1.0) < margin || std::abs(z) < margin)
            continue;
        g.push_back(z);
        g.push_back(-z);
    }
    std::sort(g.begin(), g.end());
    return g;
}

}  // namespace mkdv
