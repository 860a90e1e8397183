#include "mkdv/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mkdv {

InitialProfile::InitialProfile(std::vector<double> x, std::vector<double> q, double trunc_tol)
    : x_(std::move(x)), q_(std::move(q)), trunc_tol_(trunc_tol) {
    if (x_.size() < 8 || x_.size() != q_.size())
        throw ValidationError("profile: need >= 8 samples with matching x,q lengths");
    dx_ = x_[1] - x_[0];
    if (!(dx_ > 0.0)) throw ValidationError("profile: x grid must be strictly increasing");
    for (size_t i = 1; i < x_.size(); ++i) {
        double d = x_[i] - x_[i - 1];
        if (!(d > 0.0)) throw ValidationError("profile: x grid must be strictly increasing");
        if (std::abs(d - dx_) > 1e-9 * (1.0 + std::abs(dx_)))
            throw ValidationError("profile: x grid must be uniform");
    }
    double res = boundary_residue();
    if (res > trunc_tol_)
        throw ValidationError(
            "profile: boundary values not within truncation tolerance of -+1 "
            "(residue " +
            std::to_string(res) + ", tol " + std::to_string(trunc_tol_) + ")");
    build_spline();
}

InitialProfile InitialProfile::from_csv(const std::string &path, double trunc_tol) {
    std::ifstream in(path);
    if (!in) throw ValidationError("profile: cannot open " + path);
    std::vector<double> x, q;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.find_first_not_of("xq, \t\r") == std::string::npos)
            continue;  // header row "x,q"
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw ValidationError("profile: malformed CSV at line " + std::to_string(lineno));
        try {
            x.push_back(std::stod(a));
            q.push_back(std::stod(b));
        } catch (const std::exception &) {
            throw ValidationError("profile: non-numeric CSV field at line " +
                                  std::to_string(lineno));
        }
    }
    if (x.empty()) throw ValidationError("profile: empty CSV " + path);
    return InitialProfile(std::move(x), std::move(q), trunc_tol);
}

InitialProfile InitialProfile::from_function(const std::function<double(double)> &f,
                                             double xmin, double xmax, size_t n,
                                             double trunc_tol) {
    std::vector<double> x(n), q(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = xmin + (xmax - xmin) * static_cast<double>(i) / static_cast<double>(n - 1);
        q[i] = f(x[i]);
    }
    return InitialProfile(std::move(x), std::move(q), trunc_tol);
}

void InitialProfile::build_spline() {
    // Not-a-knot cubic spline on a uniform grid.  With uniform spacing the
    // end conditions m0 - 2m1 + m2 = 0 combine with the first interior row
    // h(m0 + 4m1 + m2) = r1 to give m1 = r1/(6h) outright (same at the far
    // end), so only m2..m_{n-3} need a tridiagonal solve.
    size_t n = x_.size();
    double h = dx_;
    std::vector<double> r(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i)
        r[i] = 6.0 * (q_[i + 1] - 2.0 * q_[i] + q_[i - 1]) / h;

    std::vector<double> m(n, 0.0);
    m[1] = r[1] / (6.0 * h);
    m[n - 2] = r[n - 2] / (6.0 * h);

    // interior unknowns m2..m_{n-3}
    size_t ni = n - 4;  // count of unknowns
    std::vector<double> diag(ni, 4.0 * h), rhs(ni);
    for (size_t j = 0; j < ni; ++j) rhs[j] = r[j + 2];
    rhs[0] -= h * m[1];
    rhs[ni - 1] -= h * m[n - 2];
    // Thomas sweep with constant off-diagonals h
    for (size_t j = 1; j < ni; ++j) {
        double f = h / diag[j - 1];
        diag[j] -= f * h;
        rhs[j] -= f * rhs[j - 1];
    }
    m[ni + 1] = rhs[ni - 1] / diag[ni - 1];
    for (size_t j = ni - 1; j-- > 0;) m[j + 2] = (rhs[j] - h * m[j + 3]) / diag[j];

    m[0] = 2.0 * m[1] - m[2];
    m[n - 1] = 2.0 * m[n - 2] - m[n - 3];

    coef_b_.resize(n - 1);
    coef_c_.resize(n - 1);
    coef_d_.resize(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        coef_b_[i] = (q_[i + 1] - q_[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0;
        coef_c_[i] = m[i] / 2.0;
        coef_d_[i] = (m[i + 1] - m[i]) / (6.0 * h);
    }
}

double InitialProfile::q_at(double x) const {
    if (x <= x_.front()) return q_.front();
    if (x >= x_.back()) return q_.back();
    auto idx = static_cast<size_t>((x - x_.front()) / dx_);
    if (idx >= x_.size() - 1) idx = x_.size() - 2;
    double t = x - x_[idx];
    return q_[idx] + t * (coef_b_[idx] + t * (coef_c_[idx] + t * coef_d_[idx]));
}

std::pair<double, double> InitialProfile::support(double tol) const {
    size_t i0 = 0, i1 = x_.size() - 1;
    while (i0 + 8 < i1 && std::abs(q_[i0] + 1.0) < tol) ++i0;
    while (i1 > i0 + 8 && std::abs(q_[i1] - 1.0) < tol) --i1;
    // one sample of margin back toward the ends
    if (i0 > 0) --i0;
    if (i1 + 1 < x_.size()) ++i1;
    return {x_[i0], x_[i1]};
}

double InitialProfile::mass() const {
    double s = 0.0;
    for (size_t i = 0; i + 1 < x_.size(); ++i) {
        double f0 = q_[i] * q_[i] - 1.0;
        double f1 = q_[i + 1] * q_[i + 1] - 1.0;
        s += 0.5 * (f0 + f1) * dx_;
    }
    return s;
}

double InitialProfile::boundary_residue() const {
    return std::max(std::abs(q_.front() + 1.0), std::abs(q_.back() - 1.0));
}

}  // namespace mkdv
