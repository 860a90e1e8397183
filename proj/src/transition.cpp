#include "mkdv/transition.hpp"

#include <cmath>

namespace mkdv {

double s_of(double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("s_of: t must be positive");
    return (x / t + 6.0) * std::pow(3.0 * t, 2.0 / 3.0) / 3.0;
}

double phi0_of(const PhaseAtOne &phase, Phi0Variant variant) {
    return variant == Phi0Variant::PrincipalValue ? phase.phi0 : phase.phi0_blaschke;
}

AsymptoticResult q_transition(double x, double t, const PhaseAtOne &phase,
                              const PIISolution &pii, Phi0Variant variant) {
    double s = s_of(x, t);
    if (!pii.in_range(s))
        throw std::domain_error("q_transition: s outside the PII solution grid");
    double amp = std::pow(3.0 * t, -1.0 / 3.0);
    AsymptoticResult res;
    res.s = s;
    res.amplitude = amp;
    res.err_scale = std::pow(t, -1.0 / 3.0 - 1.0 / 9.0);
    res.q_leading = -1.0 + amp * pii.u_at(s) * std::cos(phi0_of(phase, variant));
    return res;
}

FirstOrderMatrices first_order_matrices(double s, double t, const PhaseAtOne &phase,
                                        const PIISolution &pii, Phi0Variant variant) {
    if (!pii.in_range(s))
        throw std::domain_error("first_order_matrices: s outside the PII solution grid");
    double amp = std::pow(3.0 * t, -1.0 / 3.0);
    double u = pii.u_at(s);
    double I = pii.I_at(s);
    double phi = phi0_of(phase, variant);
    cdouble i1(0, 1);
    FirstOrderMatrices fm;
    fm.E1 = {{amp * i1 * I, amp * i1 * u * std::cos(phi), -amp * i1 * u * std::cos(phi),
              -amp * i1 * I}};
    fm.M3_at_0 = {{1.0, amp * u * std::sin(phi), amp * u * std::sin(phi), 1.0}};
    return fm;
}

}  // namespace mkdv
