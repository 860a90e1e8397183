#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mkdv/types.hpp"

namespace mkdv {

// Sampled initial datum q0 on a uniform grid with kink boundary values -1 / +1.
// A not-a-knot cubic spline provides off-node evaluation for the ODE solvers.
class InitialProfile {
   public:
    // Uniform, strictly increasing grid; |q(first)+1| and |q(last)-1| must be
    // below trunc_tol.
    InitialProfile(std::vector<double> x, std::vector<double> q, double trunc_tol = 1e-8);

    static InitialProfile from_csv(const std::string &path, double trunc_tol = 1e-8);
    static InitialProfile from_function(const std::function<double(double)> &f, double xmin,
                                        double xmax, size_t n, double trunc_tol = 1e-8);

    const std::vector<double> &x() const { return x_; }
    const std::vector<double> &q() const { return q_; }
    double dx() const { return dx_; }
    double xmin() const { return x_.front(); }
    double xmax() const { return x_.back(); }
    double trunc_tol() const { return trunc_tol_; }

    // Spline evaluation; clamps to boundary values outside the grid.
    double q_at(double x) const;

    // Largest subinterval [x[i0], x[i1]] outside which |q -+ 1| < tol at every
    // sample; the Jost integrations start from these truncated endpoints.
    std::pair<double, double> support(double tol) const;

    // Trapezoid integral of q^2 - 1 over the grid (the conserved mass).
    double mass() const;

    // Max of |q(xmin)+1|, |q(xmax)-1|: the truncation residue at the box ends.
    double boundary_residue() const;

   private:
    std::vector<double> x_, q_;
    std::vector<double> coef_b_, coef_c_, coef_d_;  // spline coefficients per interval
    double dx_ = 0.0;
    double trunc_tol_ = 1e-8;

    void build_spline();
};

}  // namespace mkdv
