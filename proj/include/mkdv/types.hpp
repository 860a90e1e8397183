#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace mkdv {

using cdouble = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846;

// Input/data validation failure (CLI exit code 2).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure: non-convergence, blow-up (CLI exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Row-major 2x2 complex matrix, just enough for the few places that need one.
struct Matrix2c {
    std::array<cdouble, 4> m{};  // [ m[0] m[1] ; m[2] m[3] ]

    cdouble &operator()(int r, int c) { return m[2 * r + c]; }
    const cdouble &operator()(int r, int c) const { return m[2 * r + c]; }

    static Matrix2c identity() { return {{1.0, 0.0, 0.0, 1.0}}; }

    cdouble det() const { return m[0] * m[3] - m[1] * m[2]; }
    cdouble trace() const { return m[0] + m[3]; }

    Matrix2c inverse() const {
        cdouble d = det();
        if (std::abs(d) == 0.0)
            throw NumericalError("Matrix2c: singular matrix");
        return {{m[3] / d, -m[1] / d, -m[2] / d, m[0] / d}};
    }

    friend Matrix2c operator*(const Matrix2c &a, const Matrix2c &b) {
        return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
                 a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
    }
    friend Matrix2c operator+(const Matrix2c &a, const Matrix2c &b) {
        Matrix2c r;
        for (int i = 0; i < 4; ++i) r.m[i] = a.m[i] + b.m[i];
        return r;
    }
    friend Matrix2c operator*(cdouble s, const Matrix2c &a) {
        Matrix2c r;
        for (int i = 0; i < 4; ++i) r.m[i] = s * a.m[i];
        return r;
    }
};

inline Matrix2c pauli1() { return {{0.0, 1.0, 1.0, 0.0}}; }
inline Matrix2c pauli2() { return {{0.0, cdouble(0, -1), cdouble(0, 1), 0.0}}; }
inline Matrix2c pauli3() { return {{1.0, 0.0, 0.0, -1.0}}; }

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * PI);
    if (a > PI) a -= 2.0 * PI;
    if (a <= -PI) a += 2.0 * PI;
    return a;
}

}  // namespace mkdv
