#pragma once

// Real quaternions q = t + x i + y j + z k with the Hamilton product
// i^2 = j^2 = k^2 = -1, ij = -ji = k, jk = -kj = i, ki = -ik = j.

#include <array>
#include <cmath>
#include <ostream>

namespace hyperma {

struct Quaternion {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double t_, double x_, double y_, double z_) : t{t_}, x{x_}, y{y_}, z{z_} {}
    // Reals embed as t-only quaternions.
    constexpr explicit Quaternion(double real) : t{real} {}

    static constexpr Quaternion one() { return {1, 0, 0, 0}; }
    static constexpr Quaternion i() { return {0, 1, 0, 0}; }
    static constexpr Quaternion j() { return {0, 0, 1, 0}; }
    static constexpr Quaternion k() { return {0, 0, 0, 1}; }

    // e_0 = 1, e_1 = i, e_2 = j, e_3 = k
    static constexpr Quaternion unit(int a) {
        switch (a) {
            case 0: return one();
            case 1: return i();
            case 2: return j();
            default: return k();
        }
    }

    constexpr double operator[](int a) const {
        switch (a) {
            case 0: return t;
            case 1: return x;
            case 2: return y;
            default: return z;
        }
    }

    constexpr std::array<double, 4> components() const { return {t, x, y, z}; }

    constexpr bool operator==(const Quaternion&) const = default;

    constexpr Quaternion operator-() const { return {-t, -x, -y, -z}; }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        t += o.t;
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        t -= o.t;
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
};

constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }

// Hamilton product; not commutative.
constexpr Quaternion mul(const Quaternion& p, const Quaternion& q) {
    return {p.t * q.t - p.x * q.x - p.y * q.y - p.z * q.z,
            p.t * q.x + p.x * q.t + p.y * q.z - p.z * q.y,
            p.t * q.y - p.x * q.z + p.y * q.t + p.z * q.x,
            p.t * q.z + p.x * q.y - p.y * q.x + p.z * q.t};
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) { return mul(p, q); }

// Real scalars commute with everything, but both sides are spelled out since
// H^n is treated as a right H-module.
constexpr Quaternion operator*(double s, const Quaternion& q) { return {s * q.t, s * q.x, s * q.y, s * q.z}; }
constexpr Quaternion operator*(const Quaternion& q, double s) { return {q.t * s, q.x * s, q.y * s, q.z * s}; }
constexpr Quaternion operator/(const Quaternion& q, double s) { return {q.t / s, q.x / s, q.y / s, q.z / s}; }

constexpr Quaternion conj(const Quaternion& q) { return {q.t, -q.x, -q.y, -q.z}; }

constexpr double real_part(const Quaternion& q) { return q.t; }

constexpr Quaternion imag_part(const Quaternion& q) { return {0.0, q.x, q.y, q.z}; }

constexpr double norm_sq(const Quaternion& q) { return q.t * q.t + q.x * q.x + q.y * q.y + q.z * q.z; }

inline double abs(const Quaternion& q) { return std::sqrt(norm_sq(q)); }

// |Im q|, the size of the non-real residue.
inline double imag_abs(const Quaternion& q) { return std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z); }

// conj(q) / |q|^2; undefined at q = 0.
constexpr Quaternion inverse(const Quaternion& q) { return conj(q) / norm_sq(q); }

inline bool isfinite(const Quaternion& q) {
    return std::isfinite(q.t) && std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z);
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '(' << q.t << ", " << q.x << ", " << q.y << ", " << q.z << ')';
}

}  // namespace hyperma
