#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../fields.hpp"
#include "../oracles.hpp"
#include "qhj/action.hpp"
#include "qhj/errors.hpp"

using namespace qhj;
using fixtures::S;

namespace {

constexpr double pi = std::numbers::pi;

// theta = c sin kx, phi = c cos kx
SolutionField3D scaled_1d(double c) {
  using fixtures::flat_pair;
  using fixtures::free_pair;
  return assemble_field({free_pair(Axis::X, 1.0), flat_pair(Axis::Y), flat_pair(Axis::Z)},
                        {{c, {S::U1, S::U1, S::U1}}}, {{c, {S::U2, S::U1, S::U1}}});
}

}  // namespace

TEST_CASE("a = 0 is rejected") {
  CHECK_THROWS_AS(ReducedActionField(fixtures::free_1d(), 0.0, 1.0), Error);
}

TEST_CASE("k is fixed to hbar a") {
  const Physics ph{0.3, 2.0};
  CHECK(ReducedActionField(fixtures::free_1d(1.0, ph), 2.5, 0.0).k() == doctest::Approx(0.75));
}

TEST_CASE("sample: classical plane wave") {
  const ReducedActionField act(fixtures::free_1d(), 1.0, 0.0);
  for (const Vec3& r : {Vec3{0.0, 0.0, 0.0}, Vec3{1.3, -2.0, 4.0}, Vec3{-7.1, 0.5, 0.0}}) {
    const ActionSample s = sample(act, r);
    CHECK(s.grad_S0[0] == doctest::Approx(1.0));
    CHECK(s.grad_S0[1] == 0.0);
    CHECK(s.grad_S0[2] == 0.0);
    CHECK(s.R == doctest::Approx(1.0));
    CHECK(std::fabs(s.hessian_R_diag[0]) < 1e-14);
  }
}

TEST_CASE("sample: a = 2 at the origin and at pi/2") {
  const ReducedActionField act(fixtures::free_1d(), 2.0, 0.0);
  const ActionSample o = sample(act, {0.0, 0.0, 0.0});
  CHECK(o.grad_S0 == Vec3{2.0, 0.0, 0.0});
  CHECK(o.R == doctest::Approx(1.0));
  CHECK(o.hessian_R_diag[0] == doctest::Approx(3.0));

  const ActionSample h = sample(act, {pi / 2, 0.0, 0.0});
  CHECK(h.grad_S0[0] == doctest::Approx(0.5));
  CHECK(h.R == doctest::Approx(2.0));
  CHECK(h.hessian_R_diag[0] == doctest::Approx(-1.5));
}

TEST_CASE("sample agrees with the closed forms over (a, b)") {
  for (auto [a, b] : {std::pair{1.0, 0.0}, {2.0, 0.0}, {1.5, 0.5}, {3.0, -1.0}, {0.5, 2.0}, {-2.0, 7.0}}) {
    const Physics ph{0.7, 1.9};
    const oracle::PlaneWave1D ref{ph.hbar, ph.mass, 1.3, a, b};
    const ReducedActionField act(fixtures::free_1d(1.3, ph), a, b);
    for (double x = -3.0; x <= 3.0; x += 0.37) {
      const ActionSample s = sample(act, {x, 0.2, -0.1});
      CHECK(s.grad_S0[0] == doctest::Approx(ref.S1(x)).epsilon(1e-12));
      CHECK(s.R == doctest::Approx(ref.R(x)).epsilon(1e-13));
      CHECK(s.hessian_R_diag[0] == doctest::Approx(ref.R2(x)).epsilon(1e-11).scale(1.0));
      CHECK(s.S0_principal == doctest::Approx(ph.hbar * std::atan((a * std::sin(1.3 * x) + b * std::cos(1.3 * x)) /
                                                                  std::cos(1.3 * x))));
    }
  }
}

TEST_CASE("S0 is reported on the principal branch") {
  const ReducedActionField act(fixtures::field_2d(), 1.5, 0.5);
  for (double x = -1.0; x <= 1.0; x += 0.1) {
    const double s = sample(act, {x, 0.6, 0.0}).S0_principal;
    CHECK(s > -pi / 2);
    CHECK(s <= pi / 2);
  }
}

TEST_CASE("grad S0 matches differences of the branch-continued S0") {
  const ReducedActionField act(fixtures::field_2d(), 3.0, -1.0);
  auto S = [&](const Vec3& r) { return sample(act, r).S0_principal; };
  for (const Vec3& r : {Vec3{0.2, 0.1, 0.0}, Vec3{-0.7, 1.1, 0.3}, Vec3{2.0, -0.4, 0.0}}) {
    const Vec3 g = sample(act, r).grad_S0;
    for (std::size_t mu = 0; mu < 2; ++mu) {
      CHECK(g[mu] == doctest::Approx(oracle::angle_d1(S, r, mu, 1e-5, pi)).epsilon(1e-6));
    }
  }
}

TEST_CASE("Hessian of R matches second differences on the 2D field") {
  const ReducedActionField act(fixtures::field_2d(), 1.5, 0.5);
  auto R = [&](const Vec3& r) {
    const double th = std::sin(r[0] + r[1]);
    const double ph = std::cos(r[0]) * std::cos(r[1]);
    const double tp = 1.5 * th + 0.5 * ph;
    return std::sqrt(tp * tp + ph * ph);
  };
  for (const Vec3& r : {Vec3{0.2, 0.1, 0.0}, Vec3{-0.7, 1.1, 0.3}}) {
    const ActionSample s = sample(act, r);
    CHECK(s.R == doctest::Approx(R(r)));
    for (std::size_t mu = 0; mu < 3; ++mu) {
      CHECK(s.hessian_R_diag[mu] == doctest::Approx(oracle::d2(R, r, mu, 1e-4)).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("nodal points are refused") {
  const ReducedActionField act(fixtures::field_2d(), 1.0, 0.0);
  try {
    (void)sample(act, {pi / 2, pi / 2, 0.0});
    FAIL("expected NodalPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NodalPoint);
  }
}

TEST_CASE("qshje residual vanishes") {
  CHECK(std::fabs(qshje_residual(ReducedActionField(fixtures::free_1d(), 1.0, 0.0), {0.3, 0.0, 0.0})) < 1e-12);
  CHECK(std::fabs(qshje_residual(ReducedActionField(fixtures::free_1d(), 2.0, 0.0), {0.7, 1.0, 1.0})) < 1e-10);

  const ReducedActionField act(fixtures::field_2d(), 1.5, 0.5);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        const Vec3 r{-1.0 + 0.5 * i + 0.013, -1.0 + 0.5 * j + 0.007, -1.0 + 0.5 * k};
        worst = std::max(worst, std::fabs(qshje_residual(act, r)));
      }
  CHECK(worst < 1e-9);
}

TEST_CASE("continuity: identity and divergence modes") {
  const ReducedActionField a1(fixtures::free_1d(), 1.0, 0.0);
  CHECK(continuity_identity_residual(a1, {0.4, 0.0, 0.0}) < 1e-13);
  CHECK(std::fabs(continuity_divergence_residual(a1, {1.0, 1.0, 1.0})) < 1e-6);

  const ReducedActionField a2(fixtures::field_2d(), 3.0, -1.0);
  double worst_div = 0.0, worst_id = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const Vec3 r{-0.9 + 0.8 * i, -0.8 + 0.8 * j, -1.0 + k};
        worst_div = std::max(worst_div, std::fabs(continuity_divergence_residual(a2, r)));
        worst_id = std::max(worst_id, continuity_identity_residual(a2, r));
      }
  CHECK(worst_div < 1e-5);
  CHECK(worst_id < 1e-13);
}

TEST_CASE("S0 derivatives along x match the closed forms") {
  for (auto [a, b] : {std::pair{2.0, 0.0}, {1.5, 0.5}, {0.5, 2.0}}) {
    const oracle::PlaneWave1D ref{1.0, 1.0, 1.0, a, b};
    const ReducedActionField act(fixtures::free_1d(), a, b);
    for (double x : {-1.2, 0.0, 0.4, 2.2}) {
      const ActionDerivatives1D d = action_derivatives_1d(act, x);
      CHECK(d.d1 == doctest::Approx(ref.S1(x)).epsilon(1e-12));
      CHECK(d.d2 == doctest::Approx(ref.S2(x)).epsilon(1e-11).scale(1.0));
      CHECK(d.d3 == doctest::Approx(ref.S3(x)).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("Floyd's 1D equation holds") {
  CHECK(std::fabs(floyd_residual_1d(ReducedActionField(fixtures::free_1d(), 1.0, 0.0), 0.3)) < 1e-12);
  CHECK(std::fabs(floyd_residual_1d(ReducedActionField(fixtures::free_1d(), 2.0, 0.0), 0.4)) < 1e-9);
  const double L = 10.0;
  CHECK(std::fabs(floyd_residual_1d(ReducedActionField(fixtures::box_1d(L, 1), 1.0, 1.0), L / 3.0)) < 1e-9);
  CHECK_THROWS_AS((void)floyd_residual_1d(ReducedActionField(fixtures::field_2d(), 1.0, 0.0), 0.3), Error);
}

TEST_CASE("common scaling of theta and phi only rescales R") {
  const ReducedActionField base(scaled_1d(1.0), 1.5, 0.5);
  const ReducedActionField scaled(scaled_1d(-3.0), 1.5, 0.5);
  for (double x : {-0.8, 0.2, 1.9}) {
    const ActionSample s0 = sample(base, {x, 0.0, 0.0});
    const ActionSample s1 = sample(scaled, {x, 0.0, 0.0});
    CHECK(s1.grad_S0[0] == doctest::Approx(s0.grad_S0[0]).epsilon(1e-14));
    CHECK(s1.R == doctest::Approx(3.0 * s0.R).epsilon(1e-14));
    CHECK(std::fabs(qshje_residual(scaled, {x, 0.0, 0.0}) - qshje_residual(base, {x, 0.0, 0.0})) < 1e-14);
  }
}
