#pragma once

#include <vector>

#include "mkdv/profile.hpp"
#include "mkdv/types.hpp"

namespace mkdv {

// Exact kink solution tanh(x + 2t) of q_t - 6 q^2 q_x + q_xxx = 0.
double kink_reference(double x, double t);

struct SimConfig {
    double L = 200.0;        // half-width of the computational box
    int N = 8192;            // grid size, power of two
    double dt = 0.004;
    double frame = 0.0;      // frame velocity c: y = x + c t (c=6 tracks x ~ -6t)
    double dealias = 2.0 / 3.0;
    bool subtract_kink = true;
    double edge_tol = 2e-2;  // |v| allowed at the box edges (sponge tolerance)
    double sanity_band = 1.5;  // |q| bound before declaring blow-up
};

struct Snapshot {
    double t;
    std::vector<double> x;   // physical coordinates (frame bookkeeping applied)
    std::vector<double> q;
    double mass;             // int (q^2 - 1)
};

struct SimResult {
    std::vector<Snapshot> snapshots;  // at requested times, ascending (T included)
    double mass_drift = 0.0;          // max |mass(t) - mass(0)|
    double max_edge_v = 0.0;          // worst |v| seen at the box edges
    double dt_used = 0.0;
    SimConfig config;
};

// Advance the background-subtracted field v (q = kink + v) with a 4th-order
// exponential integrator on the stiff -d_xxx part and 2/3-rule dealiasing on
// the cubic term.  `snapshot_times` may be empty; T is always included.
SimResult evolve(const InitialProfile &profile, double T, const SimConfig &config,
                 const std::vector<double> &snapshot_times = {});

// Trapezoid quadrature of q^2 - 1 on a uniform grid.
double conserved_mass(const std::vector<double> &x, const std::vector<double> &q);

// Pointwise cubic-interaction kernel w = v^3 + 3 kappa v^2 + 3 kappa^2 v; the
// OpenMP version is used inside evolve, the serial one is the test reference.
void cubic_interaction(const std::vector<double> &v, const std::vector<double> &kappa,
                       std::vector<double> &w);
void cubic_interaction_serial(const std::vector<double> &v, const std::vector<double> &kappa,
                              std::vector<double> &w);

// Residual of the mKdV equation for the kink reference, via high-order finite
// differences (test support).
double kink_reference_residual(double x, double t);

}  // namespace mkdv
