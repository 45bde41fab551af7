#include "qhj/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qhj/errors.hpp"

namespace qhj {

struct NumerovTable {
  double lo = 0.0;
  double step = 0.0;
  std::vector<double> x;
  std::array<std::vector<double>, 2> u;
  std::array<std::vector<double>, 2> du;
  std::vector<double> factor;  // (2 m0 / hbar^2) (V - E) at the nodes
};

namespace {

constexpr double kOverflowLimit = 1e300;

std::size_t slot(Selector s) { return static_cast<std::size_t>(s); }

double domain_slack(const Interval& d) {
  if (!d.bounded()) return 0.0;
  return 1e-12 * std::max(1.0, d.hi - d.lo);
}

}  // namespace

bool Interval::contains(double x) const {
  const double slack = domain_slack(*this);
  return x >= lo - slack && x <= hi + slack;
}

Interval AxisSolutionPair::probe_interval() const {
  if (domain_.bounded()) return domain_;
  return Interval{-1.0, 1.0};
}

double AxisSolutionPair::ode_factor(double x) const {
  const double scale = 2.0 * physics_.mass / (physics_.hbar * physics_.hbar);
  return scale * (potential_.value(x, physics_.mass) - energy_);
}

double AxisSolutionPair::ode_factor_slope(double x) const {
  const double scale = 2.0 * physics_.mass / (physics_.hbar * physics_.hbar);
  return scale * potential_.derivative(x, physics_.mass);
}

Jet AxisSolutionPair::evaluate(Selector which, double x) const {
  if (!domain_.contains(x)) {
    throw Error(ErrorKind::OutOfDomain, std::string("coordinate ") + axis_name(axis_) + " = " +
                                            std::to_string(x) + " outside solution domain");
  }
  Jet jet;
  if (source_ == SolutionSource::Catalog) {
    const CatalogEntry& entry = *catalog_;
    if (entry.id == CatalogId::ZeroEnergyFree) {
      jet.value = which == Selector::U1 ? 1.0 : x;
      jet.d1 = which == Selector::U1 ? 0.0 : 1.0;
    } else {
      const double k = entry.id == CatalogId::Free
                           ? entry.k
                           : entry.level * std::numbers::pi / entry.length;
      const double s = std::sin(k * x);
      const double c = std::cos(k * x);
      jet.value = which == Selector::U1 ? s : c;
      jet.d1 = which == Selector::U1 ? k * c : -k * s;
    }
  } else {
    const NumerovTable& t = *table_;
    const std::size_t last = t.x.size() - 1;
    const double pos = std::clamp((x - t.lo) / t.step, 0.0, static_cast<double>(last));
    std::size_t i = std::min(static_cast<std::size_t>(pos), last - 1);
    const double s = pos - static_cast<double>(i);
    const double h = t.step;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    const auto& u = t.u[slot(which)];
    const auto& du = t.du[slot(which)];
    const double ddu0 = t.factor[i] * u[i];
    const double ddu1 = t.factor[i + 1] * u[i + 1];
    jet.value = h00 * u[i] + h10 * h * du[i] + h01 * u[i + 1] + h11 * h * du[i + 1];
    jet.d1 = h00 * du[i] + h10 * h * ddu0 + h01 * du[i + 1] + h11 * h * ddu1;
  }
  const double f = ode_factor(x);
  jet.d2 = f * jet.value;
  jet.d3 = ode_factor_slope(x) * jet.value + f * jet.d1;
  return jet;
}

std::span<const double> AxisSolutionPair::nodes() const {
  if (!table_) return {};
  return table_->x;
}

std::span<const double> AxisSolutionPair::node_values(Selector which) const {
  if (!table_) return {};
  return table_->u[slot(which)];
}

double wronskian(const AxisSolutionPair& pair, double x) {
  const Jet u1 = pair.evaluate(Selector::U1, x);
  const Jet u2 = pair.evaluate(Selector::U2, x);
  return u1.value * u2.d1 - u2.value * u1.d1;
}

AxisSolutionPair solve_axis_analytic(Axis axis, const CatalogEntry& entry, const Physics& physics,
                                     std::optional<double> energy) {
  if (!(physics.hbar > 0.0) || !(physics.mass > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "hbar and mass must be positive");
  }
  AxisSolutionPair pair;
  pair.axis_ = axis;
  pair.physics_ = physics;
  pair.potential_ = AxisPotential(axis, FreePotential{});
  pair.source_ = SolutionSource::Catalog;
  pair.catalog_ = entry;

  double k = 0.0;
  switch (entry.id) {
    case CatalogId::Free:
      if (!(entry.k > 0.0) || !std::isfinite(entry.k)) {
        throw Error(ErrorKind::InvalidArgument, "free catalog entry needs k > 0");
      }
      k = entry.k;
      pair.domain_ = Interval{};
      break;
    case CatalogId::ZeroEnergyFree:
      pair.domain_ = Interval{};
      break;
    case CatalogId::Box:
      if (!(entry.length > 0.0) || entry.level < 1) {
        throw Error(ErrorKind::InvalidArgument, "box catalog entry needs L > 0 and n >= 1");
      }
      k = entry.level * std::numbers::pi / entry.length;
      pair.domain_ = Interval{0.0, entry.length};
      break;
    default:
      throw Error(ErrorKind::UnknownCatalogEntry, "unrecognised catalog id");
  }
  const double catalog_energy = physics.hbar * physics.hbar * k * k / (2.0 * physics.mass);
  if (energy && std::fabs(*energy - catalog_energy) > 1e-12 * std::max(1.0, catalog_energy)) {
    throw Error(ErrorKind::InconsistentEnergy,
                "E_axis = " + std::to_string(*energy) + " but catalog entry implies " +
                    std::to_string(catalog_energy));
  }
  pair.energy_ = catalog_energy;
  pair.wronskian_ref_ = wronskian(pair, pair.probe_interval().lo);
  return pair;
}

namespace {

// One classical RK4 pass over [x0, x0 + h] in `substeps` pieces, used only to
// seed the second Numerov node.
InitialCondition rk4_seed(const AxisPotential& potential, double energy, const Physics& physics,
                          double x0, InitialCondition start, double h, int substeps) {
  const double scale = 2.0 * physics.mass / (physics.hbar * physics.hbar);
  auto f = [&](double x) { return scale * (potential.value(x, physics.mass) - energy); };
  const double dh = h / substeps;
  double u = start.value;
  double v = start.slope;
  double x = x0;
  for (int s = 0; s < substeps; ++s) {
    const double fa = f(x);
    const double fm = f(x + 0.5 * dh);
    const double fb = f(x + dh);
    const double k1u = v, k1v = fa * u;
    const double k2u = v + 0.5 * dh * k1v, k2v = fm * (u + 0.5 * dh * k1u);
    const double k3u = v + 0.5 * dh * k2v, k3v = fm * (u + 0.5 * dh * k2u);
    const double k4u = v + dh * k3v, k4v = fb * (u + dh * k3u);
    u += dh / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += dh / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    x += dh;
  }
  return {u, v};
}

void check_overflow(double u, double x) {
  if (!std::isfinite(u) || std::fabs(u) > kOverflowLimit) {
    throw Error(ErrorKind::Overflow, "Numerov solution exceeds 1e300 near x = " +
                                         std::to_string(x) + "; shrink the domain");
  }
}

}  // namespace

AxisSolutionPair solve_axis_numerov(Axis axis, const AxisPotential& potential, double energy,
                                    const NumerovSetup& setup, const Physics& physics) {
  if (!(physics.hbar > 0.0) || !(physics.mass > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "hbar and mass must be positive");
  }
  const Interval& dom = setup.domain;
  if (!dom.bounded() || !(dom.hi > dom.lo)) {
    throw Error(ErrorKind::InvalidArgument, "Numerov domain must be a finite interval");
  }
  if (!(setup.step > 0.0)) throw Error(ErrorKind::InvalidArgument, "Numerov step must be > 0");
  if ((dom.hi - dom.lo) / setup.step < 16.0 - 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "Numerov domain must span at least 16 steps");
  }
  const auto& [v1, s1] = setup.ic1;
  const auto& [v2, s2] = setup.ic2;
  const double cross = v1 * s2 - v2 * s1;
  if (!(std::fabs(cross) > 1e-14 * std::hypot(v1, s1) * std::hypot(v2, s2))) {
    throw Error(ErrorKind::DegenerateICs, "initial conditions are linearly dependent");
  }

  const auto intervals = static_cast<std::size_t>(std::llround((dom.hi - dom.lo) / setup.step));
  const double h = (dom.hi - dom.lo) / static_cast<double>(intervals);
  const std::size_t count = intervals + 1;

  const double anchor_x = setup.anchor.value_or(dom.lo);
  const double anchor_pos = (anchor_x - dom.lo) / h;
  const auto anchor = static_cast<std::size_t>(std::llround(anchor_pos));
  if (anchor_pos < -1e-6 || anchor >= count || std::fabs(anchor_pos - anchor) > 1e-6) {
    throw Error(ErrorKind::InvalidArgument, "Numerov anchor must coincide with a grid node");
  }

  auto table = std::make_shared<NumerovTable>();
  table->lo = dom.lo;
  table->step = h;
  table->x.resize(count);
  table->factor.resize(count);
  const double scale = 2.0 * physics.mass / (physics.hbar * physics.hbar);
  for (std::size_t i = 0; i < count; ++i) {
    table->x[i] = i + 1 == count ? dom.hi : dom.lo + static_cast<double>(i) * h;
    table->factor[i] = scale * (potential.value(table->x[i], physics.mass) - energy);
  }

  const double h2 = h * h / 12.0;
  const auto& f = table->factor;
  const std::array<InitialCondition, 2> ics{setup.ic1, setup.ic2};
  for (std::size_t which = 0; which < 2; ++which) {
    auto& u = table->u[which];
    u.assign(count, 0.0);
    u[anchor] = ics[which].value;
    // Forward sweep from the anchor.
    if (anchor + 1 < count) {
      u[anchor + 1] = rk4_seed(potential, energy, physics, table->x[anchor], ics[which], h, 64).value;
      for (std::size_t i = anchor + 1; i + 1 < count; ++i) {
        const double w_prev = (1.0 - h2 * f[i - 1]) * u[i - 1];
        const double w_cur = (1.0 - h2 * f[i]) * u[i];
        const double w_next = 2.0 * w_cur - w_prev + 12.0 * h2 * f[i] * u[i];
        u[i + 1] = w_next / (1.0 - h2 * f[i + 1]);
        check_overflow(u[i + 1], table->x[i + 1]);
      }
    }
    // Backward sweep.
    if (anchor > 0) {
      u[anchor - 1] = rk4_seed(potential, energy, physics, table->x[anchor], ics[which], -h, 64).value;
      for (std::size_t i = anchor - 1; i >= 1; --i) {
        const double w_next = (1.0 - h2 * f[i + 1]) * u[i + 1];
        const double w_cur = (1.0 - h2 * f[i]) * u[i];
        const double w_prev = 2.0 * w_cur - w_next + 12.0 * h2 * f[i] * u[i];
        u[i - 1] = w_prev / (1.0 - h2 * f[i - 1]);
        check_overflow(u[i - 1], table->x[i - 1]);
      }
    }

    // Derivatives: fourth-order Numerov-consistent centered formula inside,
    // five-point one-sided stencils at the edges.
    auto& du = table->du[which];
    du.assign(count, 0.0);
    const double k6 = h * h / 6.0;
    for (std::size_t i = 1; i + 1 < count; ++i) {
      du[i] = ((1.0 - k6 * f[i + 1]) * u[i + 1] - (1.0 - k6 * f[i - 1]) * u[i - 1]) / (2.0 * h);
    }
    du[0] = (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) / (12.0 * h);
    const std::size_t n = count - 1;
    du[n] = (25.0 * u[n] - 48.0 * u[n - 1] + 36.0 * u[n - 2] - 16.0 * u[n - 3] + 3.0 * u[n - 4]) /
            (12.0 * h);
    du[anchor] = ics[which].slope;
  }

  AxisSolutionPair pair;
  pair.axis_ = axis;
  pair.energy_ = energy;
  pair.physics_ = physics;
  pair.potential_ = potential;
  pair.source_ = SolutionSource::Numerov;
  pair.table_ = std::move(table);
  pair.domain_ = dom;
  pair.wronskian_ref_ = wronskian(pair, dom.lo);
  return pair;
}

SolutionField3D::SolutionField3D(std::array<AxisSolutionPair, 3> pairs,
                                 std::vector<ProductTerm> theta_terms,
                                 std::vector<ProductTerm> phi_terms)
    : pairs_(std::move(pairs)),
      theta_terms_(std::move(theta_terms)),
      phi_terms_(std::move(phi_terms)),
      energy_(pairs_[0].energy() + pairs_[1].energy() + pairs_[2].energy()),
      physics_(pairs_[0].physics()) {}

bool SolutionField3D::contains(const Vec3& r) const {
  for (Axis a : kAxes) {
    if (!pairs_[index(a)].domain().contains(r[index(a)])) return false;
  }
  return true;
}

namespace {

using PairJets = std::array<std::array<Jet, 2>, 3>;  // [axis][selector]

PairJets all_jets(const std::array<AxisSolutionPair, 3>& pairs, const Vec3& r) {
  PairJets jets;
  for (Axis a : kAxes) {
    for (Selector s : {Selector::U1, Selector::U2}) {
      jets[index(a)][slot(s)] = pairs[index(a)].evaluate(s, r[index(a)]);
    }
  }
  return jets;
}

struct Accumulated {
  double value = 0.0;
  Vec3 grad{};
  Vec3 second{};
};

Accumulated accumulate(const std::vector<ProductTerm>& terms, const PairJets& jets) {
  Accumulated acc;
  for (const ProductTerm& term : terms) {
    const Jet& jx = jets[0][slot(term.selectors[0])];
    const Jet& jy = jets[1][slot(term.selectors[1])];
    const Jet& jz = jets[2][slot(term.selectors[2])];
    const double c = term.coefficient;
    acc.value += c * jx.value * jy.value * jz.value;
    acc.grad[0] += c * jx.d1 * jy.value * jz.value;
    acc.grad[1] += c * jx.value * jy.d1 * jz.value;
    acc.grad[2] += c * jx.value * jy.value * jz.d1;
    acc.second[0] += c * jx.d2 * jy.value * jz.value;
    acc.second[1] += c * jx.value * jy.d2 * jz.value;
    acc.second[2] += c * jx.value * jy.value * jz.d2;
  }
  return acc;
}

Jet accumulate_along(const std::vector<ProductTerm>& terms, const PairJets& jets, Axis axis) {
  Jet out;
  const std::size_t ax = index(axis);
  for (const ProductTerm& term : terms) {
    double rest = term.coefficient;
    for (std::size_t b = 0; b < 3; ++b) {
      if (b != ax) rest *= jets[b][slot(term.selectors[b])].value;
    }
    const Jet& j = jets[ax][slot(term.selectors[ax])];
    out.value += rest * j.value;
    out.d1 += rest * j.d1;
    out.d2 += rest * j.d2;
    out.d3 += rest * j.d3;
  }
  return out;
}

}  // namespace

FieldSample SolutionField3D::evaluate(const Vec3& r) const {
  const PairJets jets = all_jets(pairs_, r);
  const Accumulated theta = accumulate(theta_terms_, jets);
  const Accumulated phi = accumulate(phi_terms_, jets);
  return FieldSample{theta.value, phi.value, theta.grad, phi.grad, theta.second, phi.second};
}

AxisJets SolutionField3D::jets_along(Axis axis, const Vec3& r) const {
  const PairJets jets = all_jets(pairs_, r);
  return AxisJets{accumulate_along(theta_terms_, jets, axis),
                  accumulate_along(phi_terms_, jets, axis)};
}

double SolutionField3D::potential(const Vec3& r) const {
  double v = 0.0;
  for (Axis a : kAxes) v += pairs_[index(a)].potential().value(r[index(a)], physics_.mass);
  return v;
}

Vec3 SolutionField3D::potential_gradient(const Vec3& r) const {
  Vec3 g{};
  for (Axis a : kAxes) {
    g[index(a)] = pairs_[index(a)].potential().derivative(r[index(a)], physics_.mass);
  }
  return g;
}

bool SolutionField3D::varies_only_along(Axis axis) const {
  auto constant_factor = [&](const ProductTerm& term, Axis other) {
    const AxisSolutionPair& p = pairs_[index(other)];
    return p.catalog() && p.catalog()->id == CatalogId::ZeroEnergyFree &&
           term.selectors[index(other)] == Selector::U1;
  };
  for (const auto* terms : {&theta_terms_, &phi_terms_}) {
    for (const ProductTerm& term : *terms) {
      for (Axis other : kAxes) {
        if (other != axis && !constant_factor(term, other)) return false;
      }
    }
  }
  return true;
}

SolutionField3D assemble_field(std::array<AxisSolutionPair, 3> pairs,
                               std::vector<ProductTerm> theta_terms,
                               std::vector<ProductTerm> phi_terms) {
  for (Axis a : kAxes) {
    if (pairs[index(a)].axis() != a) {
      throw Error(ErrorKind::InvalidArgument, "solution pairs must be ordered x, y, z");
    }
    if (!(pairs[index(a)].physics() == pairs[0].physics())) {
      throw Error(ErrorKind::InvalidArgument, "solution pairs disagree on hbar or mass");
    }
  }
  if (theta_terms.empty() || phi_terms.empty()) {
    throw Error(ErrorKind::InvalidArgument, "theta and phi need at least one term each");
  }
  for (const auto* terms : {&theta_terms, &phi_terms}) {
    for (const ProductTerm& t : *terms) {
      if (!std::isfinite(t.coefficient)) {
        throw Error(ErrorKind::InvalidArgument, "term coefficients must be finite");
      }
    }
  }

  SolutionField3D field(std::move(pairs), std::move(theta_terms), std::move(phi_terms));

  constexpr int kProbe = 5;
  std::array<std::array<double, kProbe>, 3> probes;
  for (Axis a : kAxes) {
    const Interval iv = field.pair(a).probe_interval();
    for (int i = 0; i < kProbe; ++i) {
      probes[index(a)][i] = iv.lo + (iv.hi - iv.lo) * (i + 1.0) / (kProbe + 1.0);
    }
  }
  double independence = 0.0;
  for (double x : probes[0]) {
    for (double y : probes[1]) {
      for (double z : probes[2]) {
        const FieldSample s = field.evaluate({x, y, z});
        independence = std::max(independence,
                                max_abs(s.phi * s.grad_theta - s.theta * s.grad_phi));
      }
    }
  }
  if (!(independence > 1e-12)) {
    throw Error(ErrorKind::ProportionalSolutions,
                "theta and phi are proportional on the probe grid");
  }
  return field;
}

}  // namespace qhj
