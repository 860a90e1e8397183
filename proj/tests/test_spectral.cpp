#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mkdv/spectral.hpp"

using namespace mkdv;

TEST_CASE("uniformize fixed points and exact arithmetic") {
    auto u1 = uniformize(1.0);
    CHECK(std::abs(u1.lambda) == 0.0);
    CHECK(u1.k == cdouble(1.0));

    auto ui = uniformize(cdouble(0, 1));
    CHECK(std::abs(ui.lambda - cdouble(0, 1)) < 1e-15);
    CHECK(std::abs(ui.k) < 1e-15);

    auto u2 = uniformize(2.0);
    CHECK(u2.lambda == cdouble(0.75));
    CHECK(u2.k == cdouble(1.25));

    CHECK_THROWS_AS(uniformize(0.0), std::domain_error);
}

TEST_CASE("uniformization identity lambda^2 = k^2 - 1") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        cdouble z(d(rng), d(rng));
        if (std::abs(z) < 0.05) continue;
        auto u = uniformize(z);
        CHECK(std::abs(u.lambda * u.lambda - u.k * u.k + 1.0) < 1e-12 * (1.0 + std::norm(u.k)));
    }
}

TEST_CASE("theta values") {
    CHECK(std::abs(theta(1.0, 3.7)) == 0.0);
    // z=i: lambda=i, k=0 -> theta = i(xi+2)
    CHECK(std::abs(theta(cdouble(0, 1), -6.0) - cdouble(0, -4.0)) < 1e-14);
    // z=2, xi=-6: 0.75*(-6+6.25+2) = 1.6875
    CHECK(theta(2.0, -6.0).real() == doctest::Approx(1.6875).epsilon(1e-14));
    CHECK(std::abs(theta(2.0, -6.0).imag()) < 1e-15);
}

TEST_CASE("theta reflection symmetry theta(-conj z) = -conj theta(z)") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-2.5, 2.5);
    for (int i = 0; i < 200; ++i) {
        cdouble z(d(rng), d(rng));
        if (std::abs(z) < 0.05) continue;
        double xi = d(rng);
        cdouble lhs = theta(-std::conj(z), xi);
        cdouble rhs = -std::conj(theta(z, xi));
        CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("re_2i_theta closed form") {
    CHECK(re_2i_theta(0.7, 0.0, -5.0) == 0.0);  // factor -v
    CHECK(re_2i_theta(0.0, 1.0, -6.0) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK_THROWS_AS(re_2i_theta(0.0, 0.0, 1.0), std::domain_error);

    // cross-evaluation against Re(2 i theta)
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int i = 0; i < 300; ++i) {
        double u = d(rng), v = d(rng), xi = 3.0 * d(rng);
        if (u * u + v * v < 0.01) continue;
        double direct = re_2i_theta(u, v, xi);
        double via_theta = (2.0 * cdouble(0, 1) * theta(cdouble(u, v), xi)).real();
        CHECK(direct == doctest::Approx(via_theta).epsilon(1e-12));
    }

    // exact antisymmetry in v
    for (int i = 0; i < 50; ++i) {
        double u = d(rng), v = d(rng), xi = 3.0 * d(rng);
        if (u * u + v * v < 0.01) continue;
        CHECK(re_2i_theta(u, -v, xi) == -re_2i_theta(u, v, xi));
    }
}

TEST_CASE("saddle points: closed forms per regime") {
    SUBCASE("xi=-7.5 real-axis saddles") {
        auto s = saddle_points(-7.5);
        CHECK(s.regime == SaddleRegime::RealAxis);
        CHECK(!s.merged);
        CHECK(s.z[0].real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(s.z[1].real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
        CHECK(s.z[2].real() == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-14));
        CHECK(s.z[3].real() == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
        CHECK(std::abs(s.z[0] * s.z[1] - 1.0) < 1e-12);
        CHECK(std::abs(s.z[2] * s.z[3] - 1.0) < 1e-12);
    }
    SUBCASE("xi=-6 merged at +-1") {
        auto s = saddle_points(-6.0);
        CHECK(s.merged);
        CHECK(s.z[0] == cdouble(1.0));
        CHECK(s.z[3] == cdouble(-1.0));
    }
    SUBCASE("xi=10 imaginary-axis saddles") {
        auto s = saddle_points(10.0);
        CHECK(s.regime == SaddleRegime::ImaginaryAxis);
        CHECK(s.z[0].imag() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
        CHECK(s.z[1].imag() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
        CHECK(s.z[2].imag() == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
        CHECK(s.z[3].imag() == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-14));
        CHECK(std::abs(s.z[0] * s.z[1] + 1.0) < 1e-12);
        CHECK(std::abs(s.z[2] * s.z[3] + 1.0) < 1e-12);
    }
    SUBCASE("unit-circle regime keeps |z|=1") {
        for (double xi : {-5.0, -3.0, 0.0, 4.0}) {
            auto s = saddle_points(xi);
            CHECK(s.regime == SaddleRegime::UnitCircle);
            for (auto z : s.z) CHECK(std::abs(std::abs(z) - 1.0) < 1e-13);
        }
    }
}

namespace {
// theta'(z) vanishes iff (1+z^2)(3z^4 + xi z^2 + 3) = 0
cdouble theta_prime(cdouble z, double xi) {
    cdouble z2 = z * z;
    return (1.0 + z2) * (3.0 * z2 * z2 + xi * z2 + 3.0) / (2.0 * z2 * z2);
}
}  // namespace

TEST_CASE("theta' vanishes at all saddles and at +-i") {
    for (double xi : {-9.0, -6.5, -3.0, 2.0, 7.0, 12.0}) {
        auto s = saddle_points(xi);
        for (auto z : s.z) CHECK(std::abs(theta_prime(z, xi)) < 1e-10);
        CHECK(std::abs(theta_prime(cdouble(0, 1), xi)) < 1e-12);
        CHECK(std::abs(theta_prime(cdouble(0, -1), xi)) < 1e-12);
    }
}

TEST_CASE("saddle merging rate toward xi = -6") {
    // (z1(xi) - 1)/sqrt(delta) -> 1/(2 sqrt 3) as delta = -6 - xi -> 0+
    double delta = 1e-4;
    auto s = saddle_points(-6.0 - delta);
    double ratio = (s.z[0].real() - 1.0) / std::sqrt(delta);
    double target = 1.0 / (2.0 * std::sqrt(3.0));
    CHECK(std::abs(ratio / target - 1.0) < 0.01);

    // Newton oracle on P(z) = 3z^4 + xi z^2 + 3 starting off the closed form
    double xi = -6.0 - delta;
    double z = s.z[0].real() + 1e-6;
    for (int it = 0; it < 60; ++it) {
        double P = 3.0 * z * z * z * z + xi * z * z + 3.0;
        double dP = 12.0 * z * z * z + 2.0 * xi * z;
        double step = P / dP;
        z -= step;
        if (std::abs(step) < 1e-14) break;
    }
    CHECK(std::abs(z - s.z[0].real()) < 1e-10);
}

TEST_CASE("region classification") {
    CHECK(classify_region(-6.0 * 50.0, 50.0, 1.0) == RegionClass::Transition);
    CHECK(classify_region(-4.0 * 100.0, 100.0, 1.0) == RegionClass::Solitonic);
    CHECK(classify_region(0.0, 10.0, 1.0) == RegionClass::SolitonlessRight);
    CHECK(classify_region(-80.0, 10.0, 1.0) == RegionClass::SolitonlessLeft);
    CHECK_THROWS_AS(classify_region(0.0, -1.0, 1.0), std::domain_error);

    // one-sided convention: only the xi < -6 side of the band
    double t = 64.0, C = 1.0;
    double eps = 0.5 * C / std::pow(t, 2.0 / 3.0);
    CHECK(classify_region((-6.0 - eps) * t, t, C, BandConvention::OneSided) ==
          RegionClass::Transition);
    CHECK(classify_region((-6.0 + eps) * t, t, C, BandConvention::OneSided) ==
          RegionClass::Solitonic);
    CHECK(classify_region((-6.0 + eps) * t, t, C, BandConvention::TwoSided) ==
          RegionClass::Transition);
}

TEST_CASE("signature grid") {
    // nv even keeps v = 0 off the grid while staying symmetric under v -> -v
    GridBounds b{-2.0, 2.0, -2.0, 2.0};
    auto p = signature_grid(-6.0, b, 41, 40);

    SUBCASE("grid signs match pointwise evaluation") {
        for (int iu = 0; iu < 41; iu += 7)
            for (int iv = 0; iv < 40; iv += 5) {
                double val = re_2i_theta(p.u[iu], p.v[iv], -6.0);
                int want = std::abs(val) < 1e-14 * 7.0 ? 0 : (val > 0 ? 1 : -1);
                CHECK(p.at(iu, iv) == want);
            }
        // (u,v) = (0, ~1) region is strictly positive at xi = -6
        CHECK(p.at(20, 29) == 1);
        CHECK(p.v[29] > 0.9);
    }
    SUBCASE("conjugate antisymmetry") {
        for (int iu = 0; iu < 41; ++iu)
            for (int iv = 0; iv < 40; ++iv)
                CHECK(p.at(iu, iv) == -p.at(iu, 39 - iv));
    }
    SUBCASE("critical circle crossing at xi=-6 is only z=+-1") {
        // on |z|=1 the critical line meets the circle where 2(u^2-v^2)+xi+4=0,
        // i.e. u^2 - v^2 = 1 at xi=-6: only (+-1, 0)
        double v = 0.3, u = std::sqrt(1.0 - v * v);
        CHECK(std::abs(re_2i_theta(u, v, -6.0)) > 1e-3);
        CHECK(std::abs(re_2i_theta(1.0 - 1e-12, 1e-12, -6.0)) < 1e-10);
    }
    SUBCASE("serial reference matches the parallel kernel exactly") {
        auto q = signature_grid_serial(-6.0, b, 41, 40);
        CHECK(q.sign == p.sign);
    }
    SUBCASE("origin rejected, tiny grids rejected") {
        CHECK_THROWS_AS(signature_grid(-6.0, GridBounds{-1, 1, -1, 1}, 3, 3),
                        std::domain_error);
        CHECK_THROWS_AS(signature_grid(-6.0, b, 1, 5), std::domain_error);
    }
}
