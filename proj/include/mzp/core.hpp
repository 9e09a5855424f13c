#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mzp {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Heaviside-Lorentz units; hbar and c are run parameters, natural units by default.
struct PhysicsConstants {
    double hbar = 1.0;
    double c = 1.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return {v.x / n, v.y / n, v.z / n};
}

struct Int3 {
    int x = 0;
    int y = 0;
    int z = 0;

    friend constexpr bool operator==(const Int3&, const Int3&) = default;
    friend constexpr auto operator<=>(const Int3&, const Int3&) = default;

    constexpr Int3 operator-() const { return {-x, -y, -z}; }
    constexpr int max_abs() const {
        const int ax = x < 0 ? -x : x;
        const int ay = y < 0 ? -y : y;
        const int az = z < 0 ? -z : z;
        return ax > ay ? (ax > az ? ax : az) : (ay > az ? ay : az);
    }
    constexpr bool is_zero() const { return x == 0 && y == 0 && z == 0; }
};

// Guidance field is undefined where the one-photon part of the state vanishes.
class NodeError : public std::runtime_error {
  public:
    explicit NodeError(double distance)
        : std::runtime_error("configuration is inside the node tolerance (|sum c*_j q_j| = " +
                             std::to_string(distance) + ")"),
          distance_(distance) {}
    double distance() const { return distance_; }

  private:
    double distance_ = 0.0;
};

}  // namespace mzp
