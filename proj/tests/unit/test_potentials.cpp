#include <doctest.h>

#include <cmath>
#include <random>

#include "qhj/errors.hpp"
#include "qhj/potentials.hpp"

using namespace qhj;

namespace {

SeparablePotential make(AxisPotentialKind x, double mass = 1.0) {
  return SeparablePotential({AxisPotential(Axis::X, std::move(x)),
                             AxisPotential(Axis::Y, FreePotential{}),
                             AxisPotential(Axis::Z, FreePotential{})},
                            mass);
}

}  // namespace

TEST_CASE("free potential is zero everywhere") {
  const auto v = evaluate(make(FreePotential{}), {3.0, -1.0, 2.0});
  CHECK(v.total == 0.0);
  CHECK(v.per_axis == Vec3{0.0, 0.0, 0.0});
}

TEST_CASE("harmonic oscillator uses one half m omega^2 x^2") {
  const auto v = evaluate(make(HarmonicOscillator{1.0}), {2.0, 0.0, 0.0});
  CHECK(v.total == doctest::Approx(2.0));
  CHECK(v.per_axis[0] == doctest::Approx(2.0));
  CHECK(v.per_axis[1] == 0.0);

  // mass is explicit, never assumed to be 1
  const auto heavy = evaluate(make(HarmonicOscillator{0.5}, 4.0), {3.0, 0.0, 0.0});
  CHECK(heavy.total == doctest::Approx(0.5 * 4.0 * 0.25 * 9.0));
}

TEST_CASE("linear ramp") {
  const auto v = evaluate(make(LinearRamp{3.0}), {1.5, 7.0, -7.0});
  CHECK(v.total == doctest::Approx(4.5));
  CHECK(v.per_axis == Vec3{4.5, 0.0, 0.0});
}

TEST_CASE("harmonic oscillator rejects a non-positive frequency") {
  CHECK_THROWS_AS(AxisPotential(Axis::X, HarmonicOscillator{0.0}), Error);
  CHECK_THROWS_AS(AxisPotential(Axis::X, HarmonicOscillator{-1.0}), Error);
}

TEST_CASE("tabulated potential validation") {
  CHECK_THROWS_AS(TabulatedPotential({0, 1, 2}, {0, 1, 2}), Error);          // too few nodes
  CHECK_THROWS_AS(TabulatedPotential({0, 1, 1, 2}, {0, 1, 2, 3}), Error);    // not ascending
  CHECK_THROWS_AS(TabulatedPotential({0, 1, 2, 3}, {0, 1, 2}), Error);       // size mismatch
  CHECK_THROWS_AS(TabulatedPotential({0, 1, 2, 3}, {0, NAN, 2, 3}), Error);  // not finite
}

TEST_CASE("tabulated potential reproduces its nodes and leaves its grid loudly") {
  std::vector<double> grid, values;
  for (int i = 0; i <= 12; ++i) {
    grid.push_back(-3.0 + 0.5 * i + 0.01 * i * i);
    values.push_back(std::cos(grid.back()) + 0.1 * i);
  }
  const TabulatedPotential tab(grid, values);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(tab.value(grid[i]) == doctest::Approx(values[i]).epsilon(1e-15));

  const auto pot = make(tab);
  try {
    (void)pot.evaluate({grid.back() + 0.1, 0.0, 0.0});
    FAIL("expected OutOfDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfDomain);
  }
}

TEST_CASE("tabulated spline follows a smooth profile and its slope") {
  std::vector<double> grid, values;
  for (int i = 0; i <= 200; ++i) {
    grid.push_back(-2.0 + 0.02 * i);
    values.push_back(0.5 * grid.back() * grid.back());
  }
  const TabulatedPotential tab(grid, values);
  for (double x : {-1.5, -0.33, 0.0, 0.71, 1.9}) {
    CHECK(tab.value(x) == doctest::Approx(0.5 * x * x).epsilon(1e-6));
    CHECK(tab.derivative(x) == doctest::Approx(x).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("separability: moving along one axis only changes that axis' share") {
  const SeparablePotential pot({AxisPotential(Axis::X, HarmonicOscillator{1.3}),
                                AxisPotential(Axis::Y, LinearRamp{-0.7}),
                                AxisPotential(Axis::Z, HarmonicOscillator{0.4})},
                               1.7);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n < 50; ++n) {
    const Vec3 r{u(rng), u(rng), u(rng)};
    for (std::size_t i = 0; i < 3; ++i) {
      Vec3 r2 = r;
      r2[i] = u(rng);
      const auto a = pot.evaluate(r);
      const auto b = pot.evaluate(r2);
      CHECK(a.total - b.total == doctest::Approx(a.per_axis[i] - b.per_axis[i]).scale(1.0).epsilon(1e-13));
      CHECK(a.total == doctest::Approx(a.per_axis[0] + a.per_axis[1] + a.per_axis[2]));
    }
  }
}

TEST_CASE("potential gradient matches central differences") {
  const SeparablePotential pot({AxisPotential(Axis::X, HarmonicOscillator{1.3}),
                                AxisPotential(Axis::Y, LinearRamp{-0.7}),
                                AxisPotential(Axis::Z, FreePotential{})},
                               1.7);
  const Vec3 r{0.4, -1.1, 2.0};
  const Vec3 g = pot.gradient(r);
  for (std::size_t i = 0; i < 3; ++i) {
    Vec3 p = r, m = r;
    p[i] += 1e-5;
    m[i] -= 1e-5;
    CHECK(g[i] == doctest::Approx((pot.evaluate(p).total - pot.evaluate(m).total) / 2e-5).epsilon(1e-8).scale(1.0));
  }
}
