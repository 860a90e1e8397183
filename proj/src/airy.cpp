#include "mkdv/airy.hpp"

#include <cmath>
#include <stdexcept>

namespace mkdv {

namespace {

// Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3)
constexpr long double kAi0 = 0.35502805388781723926006318600418317640L;
constexpr long double kAip0 = -0.25881940379280679840518356018920396348L;
constexpr long double kSqrtPi = 1.77245385090551602729816748334114518280L;
constexpr long double kPiL = 3.14159265358979323846264338327950288L;

// u_{k+1} = u_k (6k+5)(6k+1) / (72(k+1)),  v_{k+1} = v_k (6k+7)(6k-1) / (72(k+1))
void asymptotic_sums(long double zeta, bool alternating, long double &Su, long double &Sv,
                     int kmax) {
    long double u = 1.0L, v = 1.0L;
    Su = 1.0L;
    Sv = 1.0L;
    long double zpow = 1.0L;
    long double prev_term = 1e300L;
    for (int k = 0; k < kmax; ++k) {
        long double un = u * (6.0L * k + 5.0L) * (6.0L * k + 1.0L) / (72.0L * (k + 1));
        long double vn = v * (6.0L * k + 7.0L) * (6.0L * k - 1.0L) / (72.0L * (k + 1));
        zpow /= zeta;
        long double sgn = alternating ? ((k % 2 == 0) ? -1.0L : 1.0L) : 1.0L;
        long double tu = sgn * un * zpow;
        if (std::abs((double)tu) > std::abs((double)prev_term)) break;  // divergence onset
        Su += tu;
        Sv += sgn * vn * zpow;
        prev_term = tu;
        u = un;
        v = vn;
        if (std::abs((double)tu) < 1e-22) break;
    }
}

AiryValue airy_series(double s) {
    // Ai = Ai(0) f(s) + Ai'(0) g(s) with
    //   f = sum a_k,  a_0 = 1,    a_{k+1} = a_k s^3/((3k+2)(3k+3))
    //   g = sum b_k,  b_0 = s,    b_{k+1} = b_k s^3/((3k+3)(3k+4))
    long double x = s;
    long double x3 = x * x * x;
    long double a = 1.0L, b = x;
    long double f = a, g = b, fp = 0.0L, gp = 1.0L;
    for (int k = 0; k < 200; ++k) {
        a *= x3 / ((3.0L * k + 2.0L) * (3.0L * k + 3.0L));
        b *= x3 / ((3.0L * k + 3.0L) * (3.0L * k + 4.0L));
        f += a;
        g += b;
        if (x != 0.0L) {
            fp += a * (3.0L * (k + 1)) / x;
            gp += b * (3.0L * (k + 1) + 1.0L) / x;
        }
        if (std::abs((double)a) < 1e-24 && std::abs((double)b) < 1e-24) break;
    }
    AiryValue out;
    out.s = s;
    out.Ai = (double)(kAi0 * f + kAip0 * g);
    out.Aip = (double)(kAi0 * fp + kAip0 * gp);
    return out;
}

AiryValue airy_asymptotic_pos(double s) {
    long double x = s;
    long double zeta = 2.0L / 3.0L * x * std::sqrt(x);
    long double Su, Sv;
    asymptotic_sums(zeta, true, Su, Sv, 40);
    long double pre = std::exp(-zeta) / (2.0L * kSqrtPi * std::pow(x, 0.25L));
    AiryValue out;
    out.s = s;
    out.Ai = (double)(pre * Su);
    out.Aip = (double)(-std::pow(x, 0.25L) * std::exp(-zeta) / (2.0L * kSqrtPi) * Sv);
    return out;
}

AiryValue airy_asymptotic_neg(double s) {
    long double x = -s;
    long double zeta = 2.0L / 3.0L * x * std::sqrt(x);
    // split even/odd parts of the u and v series
    long double u = 1.0L, v = 1.0L;
    long double Pu = 1.0L, Qu = 0.0L, Pv = 1.0L, Qv = 0.0L;  // P: even k, Q: odd k
    long double zpow = 1.0L;
    long double prev_mag = 1e300L;
    for (int k = 0; k < 40; ++k) {
        long double un = u * (6.0L * k + 5.0L) * (6.0L * k + 1.0L) / (72.0L * (k + 1));
        long double vn = v * (6.0L * k + 7.0L) * (6.0L * k - 1.0L) / (72.0L * (k + 1));
        zpow /= zeta;
        long double mag = un * zpow;
        if (mag < 0) mag = -mag;
        if (mag > prev_mag) break;  // optimal truncation reached
        prev_mag = mag;
        int kk = k + 1;  // index of u_{k+1}
        long double sgn = ((kk / 2) % 2 == 0) ? 1.0L : -1.0L;  // (-1)^{floor(kk/2)}
        if (kk % 2 == 0) {
            Pu += sgn * un * zpow;
            Pv += sgn * vn * zpow;
        } else {
            Qu += sgn * un * zpow;
            Qv += sgn * vn * zpow;
        }
        u = un;
        v = vn;
        if (mag < 1e-22L) break;
    }
    long double ph = zeta - 0.25L * kPiL;
    long double c = std::cos(ph), sn = std::sin(ph);
    long double x4 = std::pow(x, 0.25L);
    AiryValue out;
    out.s = s;
    out.Ai = (double)((c * Pu + sn * Qu) / (kSqrtPi * x4));
    out.Aip = (double)((x4 / kSqrtPi) * (sn * Pv - c * Qv));
    return out;
}

}  // namespace

AiryValue airy_ai(double s) {
    if (!(s >= -20.0 && s <= 20.0))
        throw std::domain_error("airy_ai: s outside supported range [-20, 20]");
    if (std::abs(s) <= 7.0) return airy_series(s);
    return s > 0.0 ? airy_asymptotic_pos(s) : airy_asymptotic_neg(s);
}

}  // namespace mkdv
