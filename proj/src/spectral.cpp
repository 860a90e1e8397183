#include "mkdv/spectral.hpp"

#include <cmath>

namespace mkdv {

Uniformized uniformize(cdouble z) {
    if (z == cdouble(0.0, 0.0))
        throw std::domain_error("uniformize: z = 0 is excluded");
    cdouble zi = 1.0 / z;
    return {0.5 * (z - zi), 0.5 * (z + zi)};
}

cdouble theta(cdouble z, double xi) {
    auto [lambda, k] = uniformize(z);
    return lambda * (xi + 4.0 * k * k + 2.0);
}

double re_2i_theta(double u, double v, double xi) {
    if (u == 0.0 && v == 0.0)
        throw std::domain_error("re_2i_theta: origin is excluded");
    double r2 = u * u + v * v;
    double r2inv = 1.0 / r2;
    double r6inv = r2inv * r2inv * r2inv;
    return -v * ((3.0 * u * u - v * v) * (1.0 + r6inv) + (xi + 3.0) * (1.0 + r2inv));
}

SaddleSet saddle_points(double xi) {
    SaddleSet s;
    s.xi = xi;
    if (xi < -6.0) {
        // eta+- real, both positive; saddles on the real axis, z1 z2 = z3 z4 = 1.
        double disc = std::sqrt(xi * xi - 36.0);
        double ep = (-xi + disc) / 6.0;
        double em = (-xi - disc) / 6.0;
        double z1 = std::sqrt(ep), z2 = std::sqrt(em);
        s.z = {cdouble(z1), cdouble(z2), cdouble(-z2), cdouble(-z1)};
        s.regime = SaddleRegime::RealAxis;
    } else if (xi > 6.0) {
        // eta+- real, both negative; saddles on the imaginary axis, products = -1.
        double disc = std::sqrt(xi * xi - 36.0);
        double ep = (-xi + disc) / 6.0;
        double em = (-xi - disc) / 6.0;
        double a1 = std::sqrt(-em), a2 = std::sqrt(-ep);
        s.z = {cdouble(0, a1), cdouble(0, a2), cdouble(0, -a2), cdouble(0, -a1)};
        s.regime = SaddleRegime::ImaginaryAxis;
    } else if (xi == -6.0) {
        s.z = {cdouble(1), cdouble(1), cdouble(-1), cdouble(-1)};
        s.regime = SaddleRegime::RealAxis;
        s.merged = true;
    } else if (xi == 6.0) {
        s.z = {cdouble(0, 1), cdouble(0, 1), cdouble(0, -1), cdouble(0, -1)};
        s.regime = SaddleRegime::ImaginaryAxis;
        s.merged = true;
    } else {
        // |xi| < 6: eta+- = (-xi +- i sqrt(36-xi^2))/6 lie on the unit circle.
        double im = std::sqrt(36.0 - xi * xi);
        double argp = std::atan2(im, -xi);
        double argm = std::atan2(-im, -xi);
        cdouble z1 = std::polar(1.0, argp / 2.0);
        cdouble z3 = std::polar(1.0, argm / 2.0);
        s.z = {z1, -z1, z3, -z3};
        s.regime = SaddleRegime::UnitCircle;
    }
    return s;
}

RegionClass classify_region(double x, double t, double C, BandConvention band) {
    if (!(t > 0.0)) throw std::domain_error("classify_region: t must be positive");
    if (!(C > 0.0)) throw std::domain_error("classify_region: C must be positive");
    double xi = x / t;
    double w = (xi + 6.0) * std::pow(t, 2.0 / 3.0);
    bool in_band = (band == BandConvention::TwoSided) ? std::abs(w) < C
                                                      : (-C < w && w < 0.0);
    if (in_band) return RegionClass::Transition;
    if (xi < -6.0) return RegionClass::SolitonlessLeft;
    if (xi <= -2.0) return RegionClass::Solitonic;
    return RegionClass::SolitonlessRight;
}

namespace {

int sign_with_threshold(double val, double xi) {
    double thresh = 1e-14 * (1.0 + std::abs(xi));
    if (std::abs(val) < thresh) return 0;
    return val > 0.0 ? 1 : -1;
}

PhasePortrait make_portrait(double xi, const GridBounds &b, int nu, int nv) {
    if (nu < 2 || nv < 2)
        throw std::domain_error("signature_grid: resolution must be >= 2 per axis");
    PhasePortrait p;
    p.xi = xi;
    p.u.resize(nu);
    p.v.resize(nv);
    for (int i = 0; i < nu; ++i)
        p.u[i] = b.umin + (b.umax - b.umin) * i / (nu - 1);
    for (int j = 0; j < nv; ++j)
        p.v[j] = b.vmin + (b.vmax - b.vmin) * j / (nv - 1);
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j)
            if (p.u[i] == 0.0 && p.v[j] == 0.0)
                throw std::domain_error("signature_grid: grid contains the origin");
    p.sign.assign(static_cast<size_t>(nu) * nv, 0);
    return p;
}

}  // namespace

PhasePortrait signature_grid(double xi, const GridBounds &bounds, int nu, int nv) {
    PhasePortrait p = make_portrait(xi, bounds, nu, nv);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nu; ++i)
            p.sign[static_cast<size_t>(j) * nu + i] =
                sign_with_threshold(re_2i_theta(p.u[i], p.v[j], xi), xi);
    return p;
}

PhasePortrait signature_grid_serial(double xi, const GridBounds &bounds, int nu, int nv) {
    PhasePortrait p = make_portrait(xi, bounds, nu, nv);
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nu; ++i)
            p.sign[static_cast<size_t>(j) * nu + i] =
                sign_with_threshold(re_2i_theta(p.u[i], p.v[j], xi), xi);
    return p;
}

}  // namespace mkdv
