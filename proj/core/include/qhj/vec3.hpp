#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace qhj {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

enum class Axis : std::size_t { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::X, Axis::Y, Axis::Z};

constexpr std::size_t index(Axis axis) { return static_cast<std::size_t>(axis); }

constexpr char axis_name(Axis axis) {
  constexpr char names[] = {'x', 'y', 'z'};
  return names[index(axis)];
}

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double max_abs(const Vec3& a) {
  return std::fmax(std::fabs(a[0]), std::fmax(std::fabs(a[1]), std::fabs(a[2])));
}

inline Vec3 unit(Axis axis) {
  Vec3 e{0.0, 0.0, 0.0};
  e[index(axis)] = 1.0;
  return e;
}

}  // namespace qhj
