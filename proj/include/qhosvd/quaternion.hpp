#pragma once

/**
 * Real quaternions q = w + x i + y j + z k.
 *
 * Multiplication follows Hamilton's rules i^2 = j^2 = k^2 = ijk = -1 and is
 * NOT commutative: qmul(p, q) != qmul(q, p) in general. Every matrix and
 * tensor routine in this library keeps operand order explicit for that reason.
 */

#include <cmath>
#include <ostream>

namespace qhosvd {

struct Quaternion {
    double w = 0.0;  // real part
    double x = 0.0;  // i
    double y = 0.0;  // j
    double z = 0.0;  // k

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
        : w{w_}, x{x_}, y{y_}, z{z_} {}

    static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
    static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
    static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

    constexpr bool operator==(const Quaternion&) const = default;

    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }

    [[nodiscard]] constexpr double real() const { return w; }
    [[nodiscard]] constexpr Quaternion imag() const { return {0.0, x, y, z}; }
    [[nodiscard]] constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
};

// Hamilton product p*q.
[[nodiscard]] constexpr Quaternion qmul(const Quaternion& p, const Quaternion& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

[[nodiscard]] constexpr Quaternion qconj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

[[nodiscard]] inline double qmodulus(const Quaternion& q) {
    return std::sqrt(q.norm2());
}

// Multiplicative inverse; throws DomainError for the zero quaternion.
[[nodiscard]] Quaternion qinv(const Quaternion& q);

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) { return qmul(a, b); }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

}  // namespace qhosvd
