#pragma once

#include <optional>
#include <vector>

#include "mkdv/profile.hpp"
#include "mkdv/types.hpp"

namespace mkdv {

// Modified Jost matrices mu+-(z; x) on the profile grid for one z.
// The boundary normalizations are E+-(z) = [[1, +-i/z], [-+i/z, 1]] and
// det mu+- = 1 - z^{-2} at every x.
struct JostPair {
    cdouble z;
    std::vector<double> x;
    std::vector<Matrix2c> mu_plus;   // normalized at the right end
    std::vector<Matrix2c> mu_minus;  // normalized at the left end
};

Matrix2c jost_boundary_matrix(cdouble z, int side);  // side: +1 -> E+, -1 -> E-

// Integrates the x-part of the Lax pair in the mu gauge on the profile grid.
// Real z (including the degenerate points +-1) fills both columns of both
// matrices; z strictly in C+ fills the analytic columns (mu+ column 1 and
// mu- column 2) and leaves the others at the boundary values.
JostPair jost_solutions(const InitialProfile &profile, cdouble z);

struct ScatteringAB {
    cdouble a;
    cdouble b;
};

// Wronskian formulas at a matching point x0 (defaults to mid-support):
//   a = det(Phi+_1, Phi-_2) / (1 - z^-2),  b = det(Phi-_1, Phi+_1) / (1 - z^-2).
ScatteringAB scattering_ab(const InitialProfile &profile, double z,
                           std::optional<double> x0 = std::nullopt);

// Analytic continuation of a(z) to Im z >= 0 via the analytic Jost columns.
cdouble scattering_a(const InitialProfile &profile, cdouble z);

struct DiscreteSpectrum {
    std::vector<cdouble> eta;        // zeros of a on the upper unit circle
    std::vector<cdouble> c;          // norming constants, c_n = eta_n |c_n|
    std::vector<cdouble> gamma;      // connection coefficients
    std::vector<cdouble> a_prime;    // a'(eta_n)
    std::vector<bool> self_symmetric;  // eta = i (counted once)
};

struct DiscreteSpectrumOptions {
    int scan_samples = 2000;
    double root_tol = 1e-10;
    double derivative_step = 1e-6;
};

DiscreteSpectrum discrete_spectrum(const InitialProfile &profile,
                                   const DiscreteSpectrumOptions &opts = {});

// Root scan of a real-valued function on the arc alpha in (0, pi); exposed so
// tests can drive it with manufactured Blaschke data.
std::vector<double> scan_circle_roots(const std::function<double(double)> &f, int samples,
                                      double tol);

struct ReflectionResult {
    cdouble r1;                      // extrapolated r(1)
    bool generic;                    // |r(1)| close to 1
    std::vector<cdouble> history;    // sampled r(1-h), r(1+h) sequence
};

// Richardson extrapolation of r(1 +- h); never divides at z = 1 itself.
ReflectionResult reflection_at_one(const InitialProfile &profile, double h0 = 0.004,
                                   double tol_generic = 0.05);

// Reflection table with discrete data; the JSON payload of `scatter`.
struct ScatteringData {
    std::vector<double> grid;      // real z samples (ascending)
    std::vector<cdouble> r;        // reflection coefficient on the grid
    DiscreteSpectrum poles;
    double mass = 0.0;             // integral of q^2 - 1
    double time = 0.0;
};

// Embarrassingly parallel map of scattering_ab over zgrid; margin guards the
// excluded points {0, +-1}.
std::vector<cdouble> reflection_grid(const InitialProfile &profile,
                                     const std::vector<double> &zgrid,
                                     double margin = 1e-3);
std::vector<cdouble> reflection_grid_serial(const InitialProfile &profile,
                                            const std::vector<double> &zgrid,
                                            double margin = 1e-3);

// r(z,t) = r(z,0) exp(2 i lambda (4k^2+2) t); a is unchanged, the norming
// constants rotate by the same exponential at eta_n.
ScatteringData evolve_scattering(const ScatteringData &data, double t);

// The unimodular evolution factor exp(2 i lambda(z) (4 k(z)^2 + 2) t).
cdouble evolution_factor(cdouble z, double t);

struct SymmetryReport {
    double max_conj_negation = 0.0;   // r(z) - conj(r(-z))
    double max_inversion = 0.0;       // r(z) + conj(r(1/z))
    double max_unitarity = 0.0;       // only if a,b supplied separately
    std::vector<size_t> flagged;      // indices exceeding tolerance
    bool pass = false;
    double tol = 0.0;
};

// Requires a grid closed under z -> -z and z -> 1/z.
SymmetryReport validate_symmetries(const ScatteringData &data, double tol = 1e-6);

// Log-symmetric grid on [1/zmax, zmax] u [-zmax, -1/zmax], closed under both
// negation and inversion, with the {0,+-1} margins removed.
std::vector<double> symmetric_zgrid(double zmax, int n_per_side, double margin = 1e-3);

}  // namespace mkdv
