#pragma once

#include <vector>

#include "mkdv/scattering.hpp"
#include "mkdv/types.hpp"

namespace mkdv {

// Dense reflection-coefficient table: a log-symmetric base grid plus graded
// wings toward the singular endpoints +-1, where a and b individually blow up
// but g = log(1 - |r|^2) = -2 log|a| stays computable.
struct ReflectionTable {
    std::vector<double> zeta;   // ascending, negation- and inversion-symmetric
    std::vector<cdouble> r;     // reflection values at zeta
    std::vector<double> g;      // log(1 - |r|^2), evaluated as -2 log|a|

    double wing_width = 0.25;   // wings cover |zeta -+ 1| in [tau_min, wing_width]
    double tau_min = 0.25 * std::pow(2.0, -30);
    double zmax = 8.0;

    cdouble r_at_one{};         // extrapolated boundary values (never a direct division)
    cdouble r_at_minus_one{};
    bool generic = false;       // |r(+-1)| at the unit-modulus boundary

    // Piecewise-linear interpolation of r (Re/Im separately).
    cdouble r_at(double z) const;
    // g with the 2 log|zeta -+ 1| structure removed before interpolating.
    double g_at(double z) const;
    double nu_at(double z) const { return -g_at(z) / (2.0 * PI); }
};

struct TableOptions {
    double zmax = 8.0;
    int n_per_side = 700;
    int wing_octaves = 30;
    int nodes_per_octave = 12;
    double wing_width = 0.25;
};

ReflectionTable build_reflection_table(const InitialProfile &profile,
                                       const TableOptions &opts = {});

// Synthetic table from explicit r samples (tests, reflectionless injections).
ReflectionTable table_from_samples(std::vector<double> zeta, std::vector<cdouble> r,
                                   cdouble r_at_one, bool generic);

// nu(r) = -log(1 - |r|^2) / (2 pi); rejects |r| >= 1.
double nu_of(cdouble rval);

// delta(z) = exp(-i integral nu(zeta)/(zeta - z) dzeta), Im z != 0.
cdouble delta_at(cdouble z, const ReflectionTable &table);

// Finite Blaschke product prod (z - eta_n)/(z - conj(eta_n)).
cdouble blaschke_h(cdouble z, const DiscreteSpectrum &spectrum);

struct PhaseAtOne {
    double p = 0.0;             // |r(1)|, clamped to [0,1]
    double phi0 = 0.0;          // principal-value route, in (-pi, pi]
    double phi0_blaschke = 0.0; // with arg h(1)^2 added (generic Blaschke route)
    bool generic = false;
    bool boundary_clamped = false;  // p was >= 1 - 1e-6 and clamped
    double pv_integral = 0.0;   // PV int log(1-|r|^2)/(zeta-1) dzeta
    double arg_h1_sq = 0.0;
};

// phi0 = arg conj(r(1)) - (1/pi) PV int log(1-|r(zeta)|^2)/(zeta-1) dzeta.
// Both variants (with and without the discrete-spectrum phase arg h(1)^2) are
// reported; the comparison pipeline adjudicates which one matches the PDE.
PhaseAtOne phi0_and_amp(const ReflectionTable &table, const DiscreteSpectrum &spectrum);

// Trace-formula reconstruction a(z) = h(z) * delta(z) for Im z > 0.
cdouble trace_reconstruct_a(cdouble z, const ReflectionTable &table,
                            const DiscreteSpectrum &spectrum);

}  // namespace mkdv
