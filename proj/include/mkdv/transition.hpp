#pragma once

#include "mkdv/cauchy.hpp"
#include "mkdv/painleve.hpp"
#include "mkdv/types.hpp"

namespace mkdv {

// Scaled space-time variable s = (1/3)(x/t + 6)(3t)^{2/3}.
double s_of(double x, double t);

enum class Phi0Variant { PrincipalValue, Blaschke };

struct AsymptoticResult {
    double q_leading;   // -1 + (3t)^{-1/3} u(s) cos(phi0)
    double s;
    double amplitude;   // (3t)^{-1/3}
    double err_scale;   // t^{-1/3-eps} with eps at its supremum 1/9 (metadata)
};

AsymptoticResult q_transition(double x, double t, const PhaseAtOne &phase,
                              const PIISolution &pii,
                              Phi0Variant variant = Phi0Variant::PrincipalValue);

// Leading-order diagnostic matrices:
//   E1      = (3t)^{-1/3} [ i I(s), i u cos(phi0) ; -i u cos(phi0), -i I(s) ]
//   M3(0)   = I + (3t)^{-1/3} [ 0, u sin(phi0) ; u sin(phi0), 0 ]
struct FirstOrderMatrices {
    Matrix2c E1;
    Matrix2c M3_at_0;
};

FirstOrderMatrices first_order_matrices(double s, double t, const PhaseAtOne &phase,
                                        const PIISolution &pii,
                                        Phi0Variant variant = Phi0Variant::PrincipalValue);

double phi0_of(const PhaseAtOne &phase, Phi0Variant variant);

}  // namespace mkdv
