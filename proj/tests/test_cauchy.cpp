#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mkdv/cauchy.hpp"

using namespace mkdv;

namespace {

InitialProfile perturbed_kink(double xmax = 25.0, size_t n = 2501) {
    return InitialProfile::from_function(
        [](double x) { return std::tanh(x) + 0.3 * std::exp(-x * x); }, -xmax, xmax, n);
}

const ReflectionTable &kink_bump_table() {
    static ReflectionTable tab = build_reflection_table(perturbed_kink());
    return tab;
}

const DiscreteSpectrum &kink_bump_spectrum() {
    static DiscreteSpectrum ds = discrete_spectrum(perturbed_kink());
    return ds;
}

ReflectionTable zero_table() {
    std::vector<double> z;
    std::vector<cdouble> r;
    for (int i = 0; i <= 200; ++i) {
        z.push_back(-6.0 + 12.0 * i / 200.0);
        r.push_back(0.0);
    }
    return table_from_samples(z, r, 0.0, false);
}

}  // namespace

TEST_CASE("nu_of") {
    CHECK(nu_of(0.0) == 0.0);
    CHECK(nu_of(cdouble(0.5, 0.0)) == doctest::Approx(-std::log(0.75) / (2 * PI)).epsilon(1e-12));
    CHECK(nu_of(cdouble(0.5, 0.0)) == doctest::Approx(0.04578).epsilon(1e-3));
    // monotone increasing in |r|
    double prev = 0.0;
    for (double m = 0.05; m < 0.999; m += 0.05) {
        double v = nu_of(cdouble(m, 0.0));
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(nu_of(cdouble(1.0, 0.0)), std::domain_error);
}

TEST_CASE("delta of the zero table is 1") {
    auto tab = zero_table();
    for (cdouble z : {cdouble(0.3, 0.4), cdouble(-2, 1), cdouble(0, 5)})
        CHECK(std::abs(delta_at(z, tab) - 1.0) < 1e-14);
    CHECK_THROWS_AS(delta_at(cdouble(0.5, 0.0), tab), std::domain_error);
}

TEST_CASE("delta far-field limit is 1") {
    const auto &tab = kink_bump_table();
    cdouble z = 1e6 * std::polar(1.0, PI / 4.0);
    CHECK(std::abs(delta_at(z, tab) - 1.0) < 1e-5);
}

TEST_CASE("delta jump ratio reproduces 1/(1-|r|^2)") {
    const auto &tab = kink_bump_table();
    double z0 = 0.5, eps = 1e-4;
    cdouble ratio = delta_at(cdouble(z0, eps), tab) / delta_at(cdouble(z0, -eps), tab);
    double expect = 1.0 / (1.0 - std::norm(tab.r_at(z0)));
    CHECK(std::abs(ratio - expect) < 1e-3 * expect);
}

TEST_CASE("delta symmetries") {
    const auto &tab = kink_bump_table();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int i = 0; i < 10; ++i) {
        cdouble z(d(rng), d(rng));
        if (std::abs(z.imag()) < 0.2) z += cdouble(0, 0.5);
        // delta(z) conj(delta(conj z)) = 1 (exact for the quadrature too)
        CHECK(std::abs(delta_at(z, tab) * std::conj(delta_at(std::conj(z), tab)) - 1.0) <
              1e-10);
        // delta(1/z) = delta(z)^{-1} via the inversion symmetry of |r|
        CHECK(std::abs(delta_at(1.0 / z, tab) - 1.0 / delta_at(z, tab)) < 1e-8);
    }
}

TEST_CASE("blaschke factor") {
    DiscreteSpectrum empty;
    CHECK(blaschke_h(cdouble(0.7, 0.3), empty) == cdouble(1.0));

    DiscreteSpectrum one;
    one.eta = {std::polar(1.0, PI / 2.0)};
    CHECK(std::abs(blaschke_h(cdouble(1.0), one) - cdouble(0, -1)) < 1e-14);
    for (double alpha : {0.3, 1.1, 2.7}) {
        DiscreteSpectrum s;
        s.eta = {std::polar(1.0, alpha)};
        cdouble expect = -std::polar(1.0, alpha);
        CHECK(std::abs(blaschke_h(cdouble(1.0), s) - expect) < 1e-13);
    }

    // unimodular on the real axis for random circle spectra
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ang(0.1, PI - 0.1);
    DiscreteSpectrum rand_spec;
    for (int i = 0; i < 6; ++i) rand_spec.eta.push_back(std::polar(1.0, ang(rng)));
    std::uniform_real_distribution<double> xr(-5.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        double x = xr(rng);
        CHECK(std::abs(std::abs(blaschke_h(cdouble(x), rand_spec)) - 1.0) < 1e-12);
    }
    CHECK(std::abs(std::abs(blaschke_h(cdouble(0.37), rand_spec)) - 1.0) < 1e-12);

    DiscreteSpectrum pole;
    pole.eta = {cdouble(0, 1)};
    CHECK_THROWS_AS(blaschke_h(cdouble(0, -1), pole), std::domain_error);
}

TEST_CASE("phi0: zero amplitude fixes the convention phi0 = 0") {
    auto tab = zero_table();
    DiscreteSpectrum empty;
    auto ph = phi0_and_amp(tab, empty);
    CHECK(ph.p == 0.0);
    CHECK(ph.phi0 == 0.0);
    CHECK(ph.phi0_blaschke == 0.0);
}

TEST_CASE("phi0: even |r| about 1 gives vanishing PV integral and phi0 = pi/2") {
    // |r(zeta)| = exp(-((zeta-1)/0.3)^2), r(1) = -i, support well inside table
    std::vector<double> z;
    std::vector<cdouble> r;
    for (int i = 0; i <= 1600; ++i) {
        double zeta = 0.2 + 1.6 * i / 1600.0;
        if (std::abs(zeta - 1.0) < 1e-9) continue;
        double mod = std::exp(-std::pow((zeta - 1.0) / 0.3, 2));
        z.push_back(zeta);
        r.push_back(cdouble(0, -1) * mod);
    }
    auto tab = table_from_samples(z, r, cdouble(0, -1), true);
    DiscreteSpectrum empty;
    auto ph = phi0_and_amp(tab, empty);
    CHECK(std::abs(ph.pv_integral) < 1e-5);
    CHECK(ph.phi0 == doctest::Approx(PI / 2.0).epsilon(1e-4));
    CHECK(ph.p == doctest::Approx(1.0));
}

TEST_CASE("phi0 for the perturbed kink is stable under table refinement") {
    const auto &tab = kink_bump_table();
    const auto &spec = kink_bump_spectrum();
    auto ph1 = phi0_and_amp(tab, spec);

    TableOptions fine;
    fine.n_per_side = 1200;
    fine.nodes_per_octave = 16;
    auto tab2 = build_reflection_table(perturbed_kink(), fine);
    auto ph2 = phi0_and_amp(tab2, spec);

    CHECK(ph1.generic);
    CHECK(ph1.p == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(ph1.phi0 - ph2.phi0) < 1e-3);
    CHECK(std::abs(ph1.pv_integral - ph2.pv_integral) < 1e-3);
    // the Blaschke-route variant differs by arg h(1)^2 exactly
    CHECK(std::abs(wrap_angle(ph1.phi0_blaschke - ph1.phi0 - ph1.arg_h1_sq)) < 1e-12);
}

TEST_CASE("trace formula: pure Blaschke cases") {
    auto tab = zero_table();
    DiscreteSpectrum empty;
    CHECK(std::abs(trace_reconstruct_a(cdouble(0.3, 1.2), tab, empty) - 1.0) < 1e-12);

    DiscreteSpectrum pole;
    pole.eta = {cdouble(0, 1)};
    for (cdouble z : {cdouble(1, 1), cdouble(0, 2), cdouble(-1, 2)}) {
        cdouble expect = (z - cdouble(0, 1)) / (z + cdouble(0, 1));
        CHECK(std::abs(trace_reconstruct_a(z, tab, pole) - expect) < 1e-12);
    }
    CHECK_THROWS_AS(trace_reconstruct_a(cdouble(1, -1), tab, pole), std::domain_error);
}

TEST_CASE("trace formula matches the direct a for the perturbed kink") {
    auto p = perturbed_kink();
    const auto &tab = kink_bump_table();
    const auto &spec = kink_bump_spectrum();
    for (cdouble z : {cdouble(1, 1), cdouble(0, 2), cdouble(-1, 2)}) {
        cdouble direct = scattering_a(p, z);
        cdouble trace = trace_reconstruct_a(z, tab, spec);
        CHECK(std::abs(direct - trace) < 1e-3 * std::abs(direct));
    }
}
