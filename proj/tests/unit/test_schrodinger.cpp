#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../fields.hpp"
#include "../oracles.hpp"
#include "qhj/errors.hpp"
#include "qhj/runs.hpp"
#include "qhj/schrodinger.hpp"

using namespace qhj;
using fixtures::S;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no qhj::Error thrown");
  return ErrorKind::InvalidArgument;
}

AxisSolutionPair free_numerov(double lo = 0.0, double hi = 10.0, double step = 1e-3) {
  NumerovSetup setup;
  setup.domain = {lo, hi};
  setup.step = step;
  return solve_axis_numerov(Axis::X, AxisPotential(Axis::X, FreePotential{}), 0.5, setup, Physics{});
}

}  // namespace

TEST_CASE("catalog: free wave") {
  const auto p = fixtures::free_pair(Axis::X, 1.0);
  CHECK(p.energy() == doctest::Approx(0.5));
  CHECK(p.evaluate(S::U1, std::numbers::pi / 2).value == doctest::Approx(1.0));
  CHECK(std::fabs(p.evaluate(S::U2, std::numbers::pi / 2).value) < 1e-15);
  CHECK(fixtures::free_pair(Axis::X, 2.0).energy() == doctest::Approx(2.0));

  const Physics ph{0.5, 3.0};
  CHECK(fixtures::free_pair(Axis::X, 2.0, ph).energy() == doctest::Approx(0.25 * 4.0 / 6.0));
}

TEST_CASE("catalog: zero-energy pair is 1 and x") {
  const auto p = fixtures::flat_pair(Axis::Y);
  CHECK(p.energy() == 0.0);
  for (double x : {-3.0, 0.0, 2.5}) {
    CHECK(p.evaluate(S::U1, x).value == 1.0);
    CHECK(p.evaluate(S::U2, x).value == x);
    CHECK(wronskian(p, x) == 1.0);
  }
}

TEST_CASE("catalog: Wronskian of (sin kx, cos kx) is -k") {
  for (double k : {1.0, 2.5}) {
    const auto p = fixtures::free_pair(Axis::X, k);
    for (double x : {-1.0, 0.0, 0.3, 4.0}) CHECK(wronskian(p, x) == doctest::Approx(-k));
  }
}

TEST_CASE("catalog: box level energy and domain") {
  CatalogEntry e{CatalogId::Box};
  e.length = 2.0;
  e.level = 3;
  const auto p = solve_axis_analytic(Axis::X, e, Physics{});
  const double k = 3.0 * std::numbers::pi / 2.0;
  CHECK(p.energy() == doctest::Approx(0.5 * k * k));
  CHECK(p.domain().lo == 0.0);
  CHECK(p.domain().hi == 2.0);
  CHECK(kind_of([&] { (void)p.evaluate(S::U1, 2.5); }) == ErrorKind::OutOfDomain);
}

TEST_CASE("catalog errors") {
  CHECK(kind_of([] {
          (void)solve_axis_analytic(Axis::X, {CatalogId::Free, 1.0}, Physics{}, 0.7);
        }) == ErrorKind::InconsistentEnergy);
  CHECK(kind_of([] {
          (void)solve_axis_analytic(Axis::X, {static_cast<CatalogId>(42)}, Physics{});
        }) == ErrorKind::UnknownCatalogEntry);
  // a matching energy is accepted
  CHECK_NOTHROW((void)solve_axis_analytic(Axis::X, {CatalogId::Free, 1.0}, Physics{}, 0.5));
}

TEST_CASE("catalog solutions satisfy the ODE to rounding") {
  const auto p = fixtures::free_pair(Axis::X, 1.7);
  const double f = -1.7 * 1.7;
  for (double x : {-2.0, 0.1, 3.3}) {
    for (Selector s : {S::U1, S::U2}) {
      const Jet j = p.evaluate(s, x);
      CHECK(std::fabs(j.d2 - f * j.value) < 1e-12);
      CHECK(std::fabs(j.d3 - f * j.d1) < 1e-12);
    }
  }
}

TEST_CASE("Numerov on a flat potential reproduces cos and sin") {
  const auto p = free_numerov();
  CHECK(p.evaluate(S::U1, 1.0).value == doctest::Approx(std::cos(1.0)).epsilon(1e-8));
  CHECK(p.evaluate(S::U2, 1.0).value == doctest::Approx(std::sin(1.0)).epsilon(1e-8));
  double worst = 0.0, worst_slope = 0.0;
  for (int i = 0; i <= 997; ++i) {
    const double x = 10.0 * i / 997.0;
    worst = std::max(worst, std::fabs(p.evaluate(S::U1, x).value - std::cos(x)));
    worst = std::max(worst, std::fabs(p.evaluate(S::U2, x).value - std::sin(x)));
    worst_slope = std::max(worst_slope, std::fabs(p.evaluate(S::U1, x).d1 + std::sin(x)));
    worst_slope = std::max(worst_slope, std::fabs(p.evaluate(S::U2, x).d1 - std::cos(x)));
  }
  CHECK(worst < 1e-8);
  CHECK(worst_slope < 1e-8);
}

TEST_CASE("Numerov Wronskian is constant") {
  const auto p = free_numerov();
  CHECK(wronskian_drift(p) < 1e-9);
  CHECK(wronskian(p, 7.0) == doctest::Approx(wronskian(p, 0.0)).epsilon(1e-9));
  CHECK(p.wronskian_ref() == doctest::Approx(1.0).epsilon(1e-12));  // ic1 = (1,0), ic2 = (0,1)
}

TEST_CASE("Numerov harmonic ground state from the centre") {
  const auto p = fixtures::harmonic_pair();
  double worst = 0.0;
  for (int i = 0; i <= 600; ++i) {
    const double x = -3.0 + 0.01 * i;
    worst = std::max(worst, std::fabs(p.evaluate(S::U1, x).value / std::exp(-0.5 * x * x) - 1.0));
  }
  CHECK(worst < 1e-6);
  CHECK(wronskian_drift(p) < 1e-9);
}

TEST_CASE("Numerov nodes satisfy the ODE by second differences") {
  const auto p = fixtures::harmonic_pair();
  const auto x = p.nodes();
  const auto u = p.node_values(S::U1);
  const double h = x[1] - x[0];
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < x.size(); i += 7) {
    const double dd = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
    const double f = 2.0 * (0.5 * x[i] * x[i] - 0.5);
    worst = std::max(worst, std::fabs(dd - f * u[i]) / std::max(1.0, std::fabs(u[i])));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("Numerov input validation") {
  NumerovSetup setup;
  setup.domain = {0.0, 1.0};
  setup.step = 0.1;  // fewer than 16 steps
  const AxisPotential flat(Axis::X, FreePotential{});
  CHECK(kind_of([&] { (void)solve_axis_numerov(Axis::X, flat, 0.5, setup, Physics{}); }) ==
        ErrorKind::InvalidArgument);

  setup.step = 1e-2;
  setup.ic1 = {1.0, 2.0};
  setup.ic2 = {-0.5, -1.0};
  CHECK(kind_of([&] { (void)solve_axis_numerov(Axis::X, flat, 0.5, setup, Physics{}); }) ==
        ErrorKind::DegenerateICs);

  NumerovSetup wide;
  wide.domain = {-40.0, 40.0};
  wide.step = 1e-2;
  CHECK(kind_of([&] {
          (void)solve_axis_numerov(Axis::X, AxisPotential(Axis::X, HarmonicOscillator{1.0}), 0.5,
                                   wide, Physics{});
        }) == ErrorKind::Overflow);
}

TEST_CASE("assemble_field: energies add up") {
  CHECK(fixtures::free_1d().energy() == doctest::Approx(0.5));
  CHECK(fixtures::field_2d().energy() == doctest::Approx(1.0));
  CHECK(fixtures::plane_wave_3d(1.0, 0.7, 1.3).energy() ==
        doctest::Approx(0.5 * (1.0 + 0.49 + 1.69)));
}

TEST_CASE("assemble_field rejects proportional and malformed input") {
  using fixtures::free_pair;
  using fixtures::flat_pair;
  CHECK(kind_of([] {
          (void)assemble_field({free_pair(Axis::X, 1.0), flat_pair(Axis::Y), flat_pair(Axis::Z)},
                               {{1.0, {S::U1, S::U1, S::U1}}}, {{2.0, {S::U1, S::U1, S::U1}}});
        }) == ErrorKind::ProportionalSolutions);
  CHECK(kind_of([] {
          (void)assemble_field({flat_pair(Axis::Y), free_pair(Axis::X, 1.0), flat_pair(Axis::Z)},
                               {{1.0, {S::U1, S::U1, S::U1}}}, {{1.0, {S::U2, S::U1, S::U1}}});
        }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] {
          (void)assemble_field({free_pair(Axis::X, 1.0), flat_pair(Axis::Y), flat_pair(Axis::Z)}, {},
                               {{1.0, {S::U2, S::U1, S::U1}}});
        }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] {
          (void)assemble_field({free_pair(Axis::X, 1.0), flat_pair(Axis::Y), flat_pair(Axis::Z)},
                               {{INFINITY, {S::U1, S::U1, S::U1}}}, {{1.0, {S::U2, S::U1, S::U1}}});
        }) == ErrorKind::InvalidArgument);
}

TEST_CASE("evaluate_field on the 1D field") {
  const auto f = fixtures::free_1d();
  const FieldSample a = evaluate_field(f, {0.0, 5.0, -2.0});
  CHECK(a.theta == 0.0);
  CHECK(a.phi == 1.0);
  CHECK(a.grad_theta == Vec3{1.0, 0.0, 0.0});
  CHECK(a.grad_phi == Vec3{-0.0, 0.0, 0.0});
  CHECK(a.second_theta == Vec3{-0.0, 0.0, 0.0});
  CHECK(a.second_phi == Vec3{-1.0, 0.0, 0.0});

  const FieldSample b = evaluate_field(f, {std::numbers::pi / 2, 0.0, 0.0});
  CHECK(b.theta == doctest::Approx(1.0));
  CHECK(std::fabs(b.phi) < 1e-15);
  CHECK(b.second_theta[0] == doctest::Approx(-1.0));
}

TEST_CASE("evaluate_field on the 2D field matches sin(x+y) and cos x cos y") {
  const auto f = fixtures::field_2d();
  const double q = std::numbers::pi / 4;
  const FieldSample s = evaluate_field(f, {q, q, 0.0});
  CHECK(s.theta == doctest::Approx(1.0));
  CHECK(std::fabs(s.grad_theta[0]) < 1e-15);
  CHECK(std::fabs(s.grad_theta[1]) < 1e-15);
  CHECK(s.grad_theta[2] == 0.0);

  const Vec3 r{0.37, -1.2, 0.8};
  const FieldSample t = evaluate_field(f, r);
  CHECK(t.theta == doctest::Approx(std::sin(r[0] + r[1])));
  CHECK(t.phi == doctest::Approx(std::cos(r[0]) * std::cos(r[1])));
  CHECK(t.second_phi[0] == doctest::Approx(-std::cos(r[0]) * std::cos(r[1])));
  CHECK(t.second_theta[1] == doctest::Approx(-std::sin(r[0] + r[1])));
}

TEST_CASE("field gradients and second partials match central differences") {
  for (const auto& f : {fixtures::field_2d(), fixtures::plane_wave_3d(1.0, 0.7, 1.3)}) {
    const Vec3 r{0.21, 0.93, -0.4};
    const FieldSample s = evaluate_field(f, r);
    auto th = [&](const Vec3& p) { return evaluate_field(f, p).theta; };
    auto ph = [&](const Vec3& p) { return evaluate_field(f, p).phi; };
    for (std::size_t mu = 0; mu < 3; ++mu) {
      CHECK(s.grad_theta[mu] == doctest::Approx(oracle::d1(th, r, mu, 1e-5)).epsilon(1e-6).scale(1.0));
      CHECK(s.grad_phi[mu] == doctest::Approx(oracle::d1(ph, r, mu, 1e-5)).epsilon(1e-6).scale(1.0));
      CHECK(s.second_theta[mu] == doctest::Approx(oracle::d2(th, r, mu, 1e-4)).epsilon(1e-6).scale(1.0));
      CHECK(s.second_phi[mu] == doctest::Approx(oracle::d2(ph, r, mu, 1e-4)).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("varies_only_along recognises embedded 1D fields") {
  CHECK(fixtures::free_1d().varies_only_along(Axis::X));
  CHECK_FALSE(fixtures::field_2d().varies_only_along(Axis::X));
  CHECK(fixtures::harmonic_1d().varies_only_along(Axis::X));
}
