#pragma once
// Reference values computed without the library: closed forms for the
// plane-wave family theta' = a sin kx + b cos kx, phi = cos kx, and plain
// central differences for anything else.

#include <cmath>
#include <functional>
#include <numbers>

#include "qhj/vec3.hpp"

namespace oracle {

/// S0' and its derivatives, R and R'' for theta' = a sin kx + b cos kx,
/// phi = cos kx, written in terms of Q = R^2 and its derivatives.
struct PlaneWave1D {
  double hbar = 1.0;
  double mass = 1.0;
  double k = 1.0;
  double a = 1.0;
  double b = 0.0;

  double energy() const { return hbar * hbar * k * k / (2.0 * mass); }

  double Q(double x) const {
    const double t = a * std::sin(k * x) + b * std::cos(k * x);
    const double p = std::cos(k * x);
    return t * t + p * p;
  }
  double dQ(double x) const {
    const double s = std::sin(k * x), c = std::cos(k * x);
    const double t = a * s + b * c, dt = k * (a * c - b * s);
    return 2.0 * t * dt - 2.0 * k * c * s;
  }
  double ddQ(double x) const {
    const double s = std::sin(k * x), c = std::cos(k * x);
    const double t = a * s + b * c, dt = k * (a * c - b * s);
    return 2.0 * dt * dt - 2.0 * k * k * t * t + 2.0 * k * k * (s * s - c * c);
  }

  double R(double x) const { return std::sqrt(Q(x)); }
  double R2(double x) const {
    const double r = R(x);
    return ddQ(x) / (2.0 * r) - dQ(x) * dQ(x) / (4.0 * r * r * r);
  }
  // The Wronskian-type numerator phi theta'_x - theta' phi_x is a k here.
  double S1(double x) const { return hbar * a * k / Q(x); }
  double S2(double x) const { return -hbar * a * k * dQ(x) / (Q(x) * Q(x)); }
  double S3(double x) const {
    const double q = Q(x);
    return -hbar * a * k * (ddQ(x) / (q * q) - 2.0 * dQ(x) * dQ(x) / (q * q * q));
  }
  double a_upper(double x) const {
    return 1.0 - hbar * hbar * R2(x) / (R(x) * S1(x) * S1(x));
  }
  /// dx/dt = 2 E / S0' along the 1D trajectory.
  double speed(double x) const { return 2.0 * energy() / S1(x); }
};

/// x(t) for the a = 2, b = 0, k = hbar = m = 1 plane wave started at 0:
/// dt = 2 dx / (1 + 3 sin^2 x) integrates to tan x = tan(t) / 2.
inline double free_a2_position(double t) {
  const double pi = std::numbers::pi;
  return std::atan(std::tan(t) / 2.0) + pi * std::floor((t + pi / 2.0) / pi);
}

/// Central first derivative of f along axis mu.
inline double d1(const std::function<double(const qhj::Vec3&)>& f, const qhj::Vec3& r,
                 std::size_t mu, double h) {
  qhj::Vec3 p = r, m = r;
  p[mu] += h;
  m[mu] -= h;
  return (f(p) - f(m)) / (2.0 * h);
}

/// Central second derivative of f along axis mu.
inline double d2(const std::function<double(const qhj::Vec3&)>& f, const qhj::Vec3& r,
                 std::size_t mu, double h) {
  qhj::Vec3 p = r, m = r;
  p[mu] += h;
  m[mu] -= h;
  return (f(p) - 2.0 * f(r) + f(m)) / (h * h);
}

/// Derivative of an angle-valued function, with the difference wrapped into
/// (-pi, pi] so that branch jumps of arctan do not matter.
inline double angle_d1(const std::function<double(const qhj::Vec3&)>& f, const qhj::Vec3& r,
                       std::size_t mu, double h, double period) {
  qhj::Vec3 p = r, m = r;
  p[mu] += h;
  m[mu] -= h;
  double diff = f(p) - f(m);
  diff -= period * std::round(diff / period);
  return diff / (2.0 * h);
}

}  // namespace oracle
