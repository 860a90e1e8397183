#pragma once

#include <vector>

#include "mkdv/types.hpp"

namespace mkdv {

// Ablowitz-Segur family of Painleve II solutions, fixed by u(s) ~ -p Ai(s).
struct PIIConfig {
    double p = 0.5;          // amplitude in [0, 1]
    double s_start = 9.0;    // large positive anchor (>= 6)
    double s_min = -10.0;
    double ds = 1.0 / 256;   // output grid spacing
    double atol = 1e-11;
    double rtol = 1e-11;
};

struct PIISolution {
    std::vector<double> s;   // descending from s_start to s_min
    std::vector<double> u;
    std::vector<double> up;  // u'(s)
    std::vector<double> I;   // tail integral int_s^inf u^2
    double p = 0.0;
    bool hastings_mcleod_flag = false;  // p at the |r(1)| = 1 boundary

    bool in_range(double sq) const {
        return sq >= s.back() - 1e-12 && sq <= s.front() + 1e-12;
    }
    // Hermite cubic interpolation of (u, u') between grid nodes.
    double u_at(double sq) const;
    double up_at(double sq) const;
    double I_at(double sq) const;
};

// Integrates u'' = 2u^3 + s u backward from s_start with the Airy anchor
// u = -p Ai, u' = -p Ai'; I(s) carries int_s^inf u^2 with the analytic
// anchor tail p^2 (Ai'(s0)^2 - s0 Ai(s0)^2).
PIISolution solve_pii(const PIIConfig &config);

// M1^P(s) = (1/2) [ -i I(s), u(s) ; u(s), i I(s) ].
Matrix2c pii_m1(const PIISolution &sol, double s);

}  // namespace mkdv
