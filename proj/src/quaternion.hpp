#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <stdexcept>

namespace qjensen {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Element of the real quaternion algebra H, coordinates w.r.t. basis 1,i,j,k.
struct Quaternion {
    double x0 = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double a, double b, double c, double d) : x0(a), x1(b), x2(c), x3(d) {}
    constexpr explicit Quaternion(double real) : x0(real) {}

    static constexpr Quaternion unit_i() { return {0, 1, 0, 0}; }
    static constexpr Quaternion unit_j() { return {0, 0, 1, 0}; }
    static constexpr Quaternion unit_k() { return {0, 0, 0, 1}; }

    constexpr double re() const { return x0; }
    constexpr Quaternion im() const { return {0, x1, x2, x3}; }

    constexpr Quaternion conj() const { return {x0, -x1, -x2, -x3}; }

    constexpr double norm_sq() const { return x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3; }
    double norm() const { return std::sqrt(norm_sq()); }
    double im_norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }

    constexpr bool is_zero() const { return x0 == 0.0 && x1 == 0.0 && x2 == 0.0 && x3 == 0.0; }
    constexpr bool is_real(double tol = 0.0) const {
        return std::abs(x1) <= tol && std::abs(x2) <= tol && std::abs(x3) <= tol;
    }

    constexpr Quaternion operator-() const { return {-x0, -x1, -x2, -x3}; }

    constexpr Quaternion& operator+=(const Quaternion& q) {
        x0 += q.x0; x1 += q.x1; x2 += q.x2; x3 += q.x3;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& q) {
        x0 -= q.x0; x1 -= q.x1; x2 -= q.x2; x3 -= q.x3;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        x0 *= s; x1 *= s; x2 *= s; x3 *= s;
        return *this;
    }

    friend constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
    friend constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
    friend constexpr Quaternion operator*(Quaternion p, double s) { return p *= s; }
    friend constexpr Quaternion operator*(double s, Quaternion p) { return p *= s; }
    friend constexpr Quaternion operator/(Quaternion p, double s) { return p *= (1.0 / s); }
    friend constexpr Quaternion operator+(Quaternion p, double s) { p.x0 += s; return p; }
    friend constexpr Quaternion operator+(double s, Quaternion p) { p.x0 += s; return p; }
    friend constexpr Quaternion operator-(Quaternion p, double s) { p.x0 -= s; return p; }
    friend constexpr Quaternion operator-(double s, const Quaternion& p) { return Quaternion(s) - p; }

    // Hamilton product.
    friend constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
        return {p.x0 * q.x0 - p.x1 * q.x1 - p.x2 * q.x2 - p.x3 * q.x3,
                p.x0 * q.x1 + p.x1 * q.x0 + p.x2 * q.x3 - p.x3 * q.x2,
                p.x0 * q.x2 - p.x1 * q.x3 + p.x2 * q.x0 + p.x3 * q.x1,
                p.x0 * q.x3 + p.x1 * q.x2 - p.x2 * q.x1 + p.x3 * q.x0};
    }

    friend constexpr bool operator==(const Quaternion& p, const Quaternion& q) {
        return p.x0 == q.x0 && p.x1 == q.x1 && p.x2 == q.x2 && p.x3 == q.x3;
    }

    constexpr std::array<double, 4> coords() const { return {x0, x1, x2, x3}; }
};

inline Quaternion inverse(const Quaternion& q) {
    const double n2 = q.norm_sq();
    if (n2 == 0.0) throw DomainError("inverse of zero quaternion");
    return q.conj() * (1.0 / n2);
}

inline Quaternion operator/(const Quaternion& p, const Quaternion& q) { return p * inverse(q); }

inline double dist(const Quaternion& p, const Quaternion& q) { return (p - q).norm(); }

/// x = alpha + I*beta with beta >= 0 and I a unit imaginary (I := i when x is real).
struct SliceCoords {
    double alpha = 0.0;
    double beta = 0.0;
    Quaternion axis = Quaternion::unit_i();
    bool real_point = true;

    Quaternion reconstruct() const { return Quaternion(alpha) + axis * beta; }
};

inline SliceCoords slice_decompose(const Quaternion& q) {
    SliceCoords s;
    s.alpha = q.re();
    s.beta = q.im_norm();
    if (s.beta > 0.0) {
        s.axis = q.im() * (1.0 / s.beta);
        s.real_point = false;
    }
    return s;
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

} // namespace qjensen
