#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mkdv/airy.hpp"
#include "mkdv/transition.hpp"

using namespace mkdv;

namespace {

PhaseAtOne make_phase(double p, double phi0) {
    PhaseAtOne ph;
    ph.p = p;
    ph.phi0 = phi0;
    ph.phi0_blaschke = wrap_angle(phi0 + PI);
    ph.generic = p > 0.95;
    return ph;
}

const PIISolution &pii_half() {
    static PIISolution sol = [] {
        PIIConfig cfg;
        cfg.p = 0.5;
        return solve_pii(cfg);
    }();
    return sol;
}

}  // namespace

TEST_CASE("scaled variable s_of") {
    CHECK(s_of(-6.0 * 17.0, 17.0) == 0.0);
    CHECK(s_of(-7.0 / 3.0, 1.0 / 3.0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(s_of(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(s_of(1.0, -2.0), std::domain_error);
    // monotone increasing in x at fixed t
    double t = 7.0;
    double prev = s_of(-6.0 * t - 1.0, t);
    for (double x = -6.0 * t - 0.5; x <= -6.0 * t + 1.0; x += 0.25) {
        double cur = s_of(x, t);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("q_transition basics") {
    auto ph = make_phase(0.5, 0.3);
    const auto &pii = pii_half();

    SUBCASE("zero solution gives the background -1") {
        PIIConfig cfg;
        cfg.p = 0.0;
        auto z = solve_pii(cfg);
        auto ph0 = make_phase(0.0, 0.0);
        for (double t : {5.0, 40.0}) {
            auto r = q_transition(-6.0 * t + 0.3, t, ph0, z);
            CHECK(r.q_leading == -1.0);
        }
    }

    SUBCASE("t -> 8t scaling halves the deviation at fixed s") {
        double s = 0.7, t = 5.0;
        double x1 = s * std::cbrt(3.0 * t) - 6.0 * t;
        double x2 = s * std::cbrt(3.0 * 8.0 * t) - 6.0 * 8.0 * t;
        auto r1 = q_transition(x1, t, ph, pii);
        auto r2 = q_transition(x2, 8.0 * t, ph, pii);
        CHECK(std::abs(r1.s - s) < 1e-12);
        CHECK(std::abs(r2.s - s) < 1e-12);
        CHECK((r2.q_leading + 1.0) == doctest::Approx(0.5 * (r1.q_leading + 1.0)).epsilon(1e-12));
    }

    SUBCASE("(q+1)(3t)^{1/3} is t-independent at fixed s") {
        double s = -1.3;
        double ref = 0.0;
        bool first = true;
        for (double t : {5.0, 10.0, 20.0, 40.0, 80.0}) {
            double x = s * std::cbrt(3.0 * t) - 6.0 * t;
            auto r = q_transition(x, t, ph, pii);
            double k = (r.q_leading + 1.0) * std::pow(3.0 * t, 1.0 / 3.0);
            if (first) {
                ref = k;
                first = false;
            } else {
                CHECK(k == doctest::Approx(ref).epsilon(1e-12));
            }
        }
    }

    SUBCASE("airy-rate decay for s >= 6") {
        auto phg = make_phase(0.5, 0.0);
        double t = 20.0;
        for (double s : {6.0, 7.0, 8.0}) {
            double x = s * std::cbrt(3.0 * t) - 6.0 * t;
            auto r = q_transition(x, t, phg, pii);
            double bound = std::pow(3.0 * t, -1.0 / 3.0) * 0.5 * airy_ai(s).Ai * (1.0 + 1e-3);
            CHECK(std::abs(r.q_leading + 1.0) <= bound);
        }
    }

    SUBCASE("s outside the solution grid is rejected") {
        CHECK_THROWS_AS(q_transition(-6.0 * 5.0 + 100.0, 5.0, ph, pii), std::domain_error);
    }

    SUBCASE("continuity in x across grid cells") {
        double t = 10.0;
        double prev = q_transition(-6.0 * t - 1.0, t, ph, pii).q_leading;
        for (double dxs = -0.99; dxs <= 1.0; dxs += 0.01) {
            double cur = q_transition(-6.0 * t + dxs, t, ph, pii).q_leading;
            CHECK(std::abs(cur - prev) < 2e-3);
            prev = cur;
        }
    }
}

TEST_CASE("phi0 variant selection") {
    auto ph = make_phase(0.9, 0.4);
    CHECK(phi0_of(ph, Phi0Variant::PrincipalValue) == 0.4);
    CHECK(phi0_of(ph, Phi0Variant::Blaschke) == doctest::Approx(wrap_angle(0.4 + PI)));
}

TEST_CASE("first-order matrices") {
    const auto &pii = pii_half();

    SUBCASE("zero amplitude collapses to the identity data") {
        PIIConfig cfg;
        cfg.p = 0.0;
        auto z = solve_pii(cfg);
        auto fm = first_order_matrices(0.0, 100.0, make_phase(0.0, 0.0), z);
        for (auto e : fm.E1.m) CHECK(std::abs(e) == 0.0);
        CHECK(fm.M3_at_0(0, 0) == cdouble(1.0));
        CHECK(fm.M3_at_0(0, 1) == cdouble(0.0));
    }

    SUBCASE("E1 is traceless with the +-i int u^2 diagonal") {
        auto fm = first_order_matrices(-1.0, 50.0, make_phase(0.7, 0.3), pii);
        CHECK(fm.E1(0, 0) == -fm.E1(1, 1));
        CHECK(fm.E1(0, 0).real() == 0.0);
        CHECK(fm.E1(0, 0).imag() > 0.0);  // +i int u^2 (3t)^{-1/3}
        CHECK(fm.E1(0, 1) == -fm.E1(1, 0));
    }

    SUBCASE("reconstruction consistency against q_transition") {
        double t = 100.0, s = 0.0;
        auto ph = make_phase(0.9, 0.4);
        auto fm = first_order_matrices(s, t, ph, pii);
        auto Minv = fm.M3_at_0.inverse();
        cdouble val = cdouble(0, 1) * ((pauli2() * Minv)(1, 0) + fm.E1(1, 0));
        double x = s * std::cbrt(3.0 * t) - 6.0 * t;
        double q = q_transition(x, t, ph, pii).q_leading;
        double u = pii.u_at(s);
        CHECK(std::abs(val.real() - q) < 5.0 * std::pow(3.0 * t, -2.0 / 3.0) * (1.0 + u * u));
        CHECK(std::abs(val.imag()) < 1e-12);
    }
}
