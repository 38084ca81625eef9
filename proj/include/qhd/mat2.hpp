#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace qhd {

using cplx = std::complex<double>;
using Vec2c = std::array<cplx, 2>;

// Small fixed-size 2x2 types. Everything in the symbol analysis is 2x2 and
// closed-form, so these stay deliberately minimal.
struct Mat2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

    static Mat2 identity() { return {1, 0, 0, 1}; }
    static Mat2 diag(double d1, double d2) { return {d1, 0, 0, d2}; }

    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    Mat2 sym() const { return {a11, 0.5 * (a12 + a21), 0.5 * (a12 + a21), a22}; }
    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}

inline Mat2 operator*(double s, const Mat2& a) {
    return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

// Eigenvalues of a symmetric 2x2, smaller first (closed form).
inline std::array<double, 2> sym_eigenvalues(const Mat2& m) {
    const double mean = 0.5 * (m.a11 + m.a22);
    const double off = 0.5 * (m.a12 + m.a21);
    const double half_gap = 0.5 * (m.a11 - m.a22);
    const double r = std::hypot(half_gap, off);
    return {mean - r, mean + r};
}

// Matrix 2-norm (largest singular value) of a real 2x2.
inline double spectral_norm(const Mat2& m) {
    const Mat2 mtm = m.transpose() * m;
    return std::sqrt(std::max(0.0, sym_eigenvalues(mtm)[1]));
}

struct CMat2 {
    cplx a11{0, 0}, a12{0, 0}, a21{0, 0}, a22{0, 0};

    static CMat2 identity() { return {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}}; }
    static CMat2 from_real(const Mat2& m) {
        return {cplx{m.a11, 0}, cplx{m.a12, 0}, cplx{m.a21, 0}, cplx{m.a22, 0}};
    }

    cplx trace() const { return a11 + a22; }
    cplx det() const { return a11 * a22 - a12 * a21; }
    CMat2 conj() const {
        return {std::conj(a11), std::conj(a12), std::conj(a21), std::conj(a22)};
    }
};

inline CMat2 operator+(const CMat2& a, const CMat2& b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}

inline CMat2 operator-(const CMat2& a, const CMat2& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}

inline CMat2 operator*(cplx s, const CMat2& a) {
    return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}

inline CMat2 operator*(const CMat2& a, const CMat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

inline Vec2c operator*(const CMat2& m, const Vec2c& v) {
    return {m.a11 * v[0] + m.a12 * v[1], m.a21 * v[0] + m.a22 * v[1]};
}

inline double max_abs(const CMat2& m) {
    return std::max(std::max(std::abs(m.a11), std::abs(m.a12)),
                    std::max(std::abs(m.a21), std::abs(m.a22)));
}

inline double norm2(const Vec2c& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
}

}  // namespace qhd
