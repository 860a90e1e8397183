#pragma once

#include <vector>

#include "mkdv/types.hpp"

namespace mkdv {

// Uniformization z = k + lambda of the two-sheeted lambda^2 = k^2 - 1 plane:
//   lambda(z) = (z - 1/z)/2,  k(z) = (z + 1/z)/2.
struct Uniformized {
    cdouble lambda;
    cdouble k;
};

Uniformized uniformize(cdouble z);

// Phase function theta(z) = lambda(z) * (xi + 4 k(z)^2 + 2), xi = x/t.
cdouble theta(cdouble z, double xi);

// Closed form for Re(2 i theta) at z = u + i v:
//   -v * ( (3u^2 - v^2)(1 + (u^2+v^2)^-3) + (xi+3)(1 + (u^2+v^2)^-1) ).
double re_2i_theta(double u, double v, double xi);

enum class SaddleRegime { RealAxis, UnitCircle, ImaginaryAxis };

// The four xi-dependent stationary points of theta (roots of 3z^4 + xi z^2 + 3
// times the fixed factor 1+z^2).  z = +i and z = -i are stationary for every xi.
struct SaddleSet {
    std::array<cdouble, 4> z{};  // z1..z4, ordering follows the regime convention
    SaddleRegime regime = SaddleRegime::RealAxis;
    bool merged = false;  // xi = -6 (all at +-1) or xi = +6 (all at +-i)
    double xi = 0.0;
};

SaddleSet saddle_points(double xi);

enum class RegionClass { SolitonlessLeft, Transition, Solitonic, SolitonlessRight };

// Width convention of the transition band around x/t = -6.
enum class BandConvention { TwoSided, OneSided };

RegionClass classify_region(double x, double t, double C,
                            BandConvention band = BandConvention::TwoSided);

struct GridBounds {
    double umin, umax, vmin, vmax;
};

// Sign field of Re(2 i theta) on a rectangular grid, row-major over v then u.
// Values in {-1, 0, +1}; zero when |value| < 1e-14 * (1 + |xi|).
struct PhasePortrait {
    std::vector<double> u;     // nu axis values
    std::vector<double> v;     // nv axis values
    std::vector<int> sign;     // size nu*nv, index = iv*nu + iu
    double xi = 0.0;

    int at(int iu, int iv) const { return sign[static_cast<size_t>(iv) * u.size() + iu]; }
};

PhasePortrait signature_grid(double xi, const GridBounds &bounds, int nu, int nv);

// Serial reference for the OpenMP kernel above; kept for testing and benches.
PhasePortrait signature_grid_serial(double xi, const GridBounds &bounds, int nu, int nv);

}  // namespace mkdv
