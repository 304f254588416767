/**
 * @file types.hpp
 * @brief Small vector types, constants and the exception hierarchy shared by
 * every module.
 */
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wolter {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Real 3-vector.
struct Vec3 {
    double x{};
    double y{};
    double z{};

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Complex 3-vector. dot() is the bilinear product (no conjugation).
struct CVec3 {
    cplx x{};
    cplx y{};
    cplx z{};

    CVec3 operator+(const CVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    CVec3 operator-(const CVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    CVec3 operator*(cplx s) const { return {x * s, y * s, z * s}; }
    CVec3& operator+=(const CVec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }

    Vec3 real() const { return {x.real(), y.real(), z.real()}; }
    Vec3 imag() const { return {x.imag(), y.imag(), z.imag()}; }
    static CVec3 from_real(const Vec3& v) { return {v.x, v.y, v.z}; }
};

inline CVec3 operator*(cplx s, const CVec3& v) { return v * s; }
inline cplx dot(const CVec3& a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline cplx dot(const CVec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
/// Hermitian squared norm sum |a_i|^2.
inline double norm2(const CVec3& a) { return std::norm(a.x) + std::norm(a.y) + std::norm(a.z); }

/// Point in the plane of incidence (x = 0). y runs along the interface, z
/// across it.
struct Point2 {
    double y{};
    double z{};

    constexpr Point2 operator+(const Point2& o) const { return {y + o.y, z + o.z}; }
    constexpr Point2 operator-(const Point2& o) const { return {y - o.y, z - o.z}; }
    constexpr Point2 operator*(double s) const { return {y * s, z * s}; }
    constexpr bool operator==(const Point2&) const = default;
};

inline double distance(const Point2& a, const Point2& b) { return std::hypot(a.y - b.y, a.z - b.z); }
constexpr Vec3 in_plane(const Point2& p) { return {0.0, p.y, p.z}; }

/// Wraps an angle to (-pi, pi].
inline double wrap_phase(double a) {
    double w = std::remainder(a, kTwoPi);
    if (w <= -kPi) w += kTwoPi;
    return w;
}

// Errors ---------------------------------------------------------------------

/// Argument outside the physical domain of an operation (e.g. angle below
/// the critical angle where total reflection is required).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DegenerateBasisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidModeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The phase is undefined at the evaluation point (|V| below the node
/// threshold).
class NodeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class InvalidContourError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace wolter
