#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qhj/dynamics.hpp"
#include "qhj/errors.hpp"

namespace qhj::detail {

template <std::size_t N>
using OdeState = std::array<double, N>;

/// Why an integration stopped early.
struct Stop {
  Termination kind = Termination::SingularityEvent;
  SingularityKind singularity = SingularityKind::None;
  std::string detail;
};

struct Watch {
  double dip = 0.0;
  std::array<double, 3> signs{};
};

template <std::size_t N>
struct OdeSolution {
  std::vector<double> t;
  std::vector<OdeState<N>> y;
  TerminationRecord termination;
};

/// Autonomous Dormand-Prince 5(4) with FSAL, PI-free step control and a
/// bisection event locator.
///
/// `check` flags bad states at step ends. `watch` exposes what `check` looks
/// at so that events strictly inside a step are also caught: a minimum of
/// `dip` below `cfg.singularity_eps` (a trajectory running straight through a
/// nodal point) or a sign change of one of `signs` (NaN entries are ignored).
template <std::size_t N>
class DormandPrince {
 public:
  using Rhs = std::function<OdeState<N>(const OdeState<N>&)>;
  using Check = std::function<std::optional<Stop>(const OdeState<N>&)>;
  using Locate = std::function<Vec3(const OdeState<N>&)>;
  using WatchFn = std::function<Watch(const OdeState<N>&)>;

  DormandPrince(Rhs rhs, Check check, WatchFn watch, Locate position,
                const IntegratorConfig& config)
      : rhs_(std::move(rhs)), check_(std::move(check)), watch_(std::move(watch)),
        position_(std::move(position)), cfg_(config) {}

  OdeSolution<N> run(const OdeState<N>& y0) const {
    OdeSolution<N> out;
    double t = 0.0;
    OdeState<N> y = y0;
    OdeState<N> k1 = rhs_(y);
    out.t.push_back(t);
    out.y.push_back(y);

    const double t_end = cfg_.t_end;
    const double h_min = 1e-14 * t_end;
    double h = std::min(cfg_.max_step, 1e-3 * t_end);

    auto finish = [&](Termination kind, SingularityKind sk, double te, const OdeState<N>& ye,
                      std::string detail) {
      out.termination = TerminationRecord{kind, sk, te, position_(ye), std::move(detail)};
      return out;
    };

    while (t < t_end) {
      const double remaining = t_end - t;
      if (remaining <= h_min) break;
      h = std::min({h, cfg_.max_step, remaining});
      const bool last = h >= remaining;

      Trial trial;
      try {
        trial = step(y, k1, h);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::OutOfDomain) {
          locate(out, t, y, k1, h);
          return finish(Termination::DomainExit, SingularityKind::None, out.t.back(),
                        out.y.back(), e.what());
        }
        h *= 0.25;
        if (h < h_min) {
          return finish(Termination::SingularityEvent, kind_of(e), t, y, e.what());
        }
        continue;
      }

      if (trial.error > 1.0) {
        h *= std::max(0.2, 0.9 * std::pow(trial.error, -0.2));
        if (h < h_min) {
          return finish(Termination::SingularityEvent, SingularityKind::StepUnderflow, t, y,
                        "step size fell below 1e-14 * t_end");
        }
        continue;
      }

      if (auto stop = check_(trial.y)) {
        locate(out, t, y, k1, h);
        return finish(stop->kind, stop->singularity, out.t.back(), out.y.back(), stop->detail);
      }
      if (auto hit = interior_event(y, k1, trial, h)) {
        if (hit->action == DipResult::Event) {
          append(out, t, y, k1, hit->length);
          return finish(hit->stop.kind, hit->stop.singularity, out.t.back(), out.y.back(),
                        hit->stop.detail);
        }
        h = hit->length;
        if (h < h_min) {
          return finish(Termination::SingularityEvent, SingularityKind::StepUnderflow, t, y,
                        "step size fell below 1e-14 * t_end");
        }
        continue;
      }

      t = last ? t_end : t + h;
      y = trial.y;
      k1 = trial.k_last;
      out.t.push_back(t);
      out.y.push_back(y);
      const double grow = trial.error > 0.0 ? 0.9 * std::pow(trial.error, -0.2) : 5.0;
      h *= std::min(5.0, grow);
    }
    out.termination = TerminationRecord{Termination::Completed, SingularityKind::None, t,
                                        position_(y), ""};
    return out;
  }

 private:
  struct Trial {
    OdeState<N> y{};
    OdeState<N> k_last{};
    double error = 0.0;
  };

  static SingularityKind kind_of(const Error& e) {
    switch (e.kind()) {
      case ErrorKind::NodalPoint: return SingularityKind::NodalPoint;
      case ErrorKind::NodeSingularity: return SingularityKind::NodeSingularity;
      default: return SingularityKind::StepUnderflow;
    }
  }

  Trial step(const OdeState<N>& y, const OdeState<N>& k1, double h) const {
    static constexpr double c21 = 1.0 / 5.0;
    static constexpr double c31 = 3.0 / 40.0, c32 = 9.0 / 40.0;
    static constexpr double c41 = 44.0 / 45.0, c42 = -56.0 / 15.0, c43 = 32.0 / 9.0;
    static constexpr double c51 = 19372.0 / 6561.0, c52 = -25360.0 / 2187.0,
                            c53 = 64448.0 / 6561.0, c54 = -212.0 / 729.0;
    static constexpr double c61 = 9017.0 / 3168.0, c62 = -355.0 / 33.0,
                            c63 = 46732.0 / 5247.0, c64 = 49.0 / 176.0,
                            c65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    auto combine = [&](std::initializer_list<std::pair<double, const OdeState<N>*>> terms) {
      OdeState<N> r = y;
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        for (const auto& [c, k] : terms) acc += c * (*k)[i];
        r[i] += h * acc;
      }
      return r;
    };

    const OdeState<N> k2 = rhs_(combine({{c21, &k1}}));
    const OdeState<N> k3 = rhs_(combine({{c31, &k1}, {c32, &k2}}));
    const OdeState<N> k4 = rhs_(combine({{c41, &k1}, {c42, &k2}, {c43, &k3}}));
    const OdeState<N> k5 = rhs_(combine({{c51, &k1}, {c52, &k2}, {c53, &k3}, {c54, &k4}}));
    const OdeState<N> k6 =
        rhs_(combine({{c61, &k1}, {c62, &k2}, {c63, &k3}, {c64, &k4}, {c65, &k5}}));
    Trial trial;
    trial.y = combine({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    trial.k_last = rhs_(trial.y);

    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                              e7 * trial.k_last[i]);
      const double scale =
          cfg_.abs_tol + cfg_.rel_tol * std::max(std::fabs(y[i]), std::fabs(trial.y[i]));
      sum += (err / scale) * (err / scale);
    }
    trial.error = std::sqrt(sum / static_cast<double>(N));
    return trial;
  }

  static OdeState<N> hermite(const OdeState<N>& y0, const OdeState<N>& f0,
                             const OdeState<N>& y1, const OdeState<N>& f1, double h, double s) {
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    OdeState<N> r{};
    for (std::size_t i = 0; i < N; ++i) {
      r[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
    }
    return r;
  }

  Watch watch_or_bad(const OdeState<N>& y) const {
    try {
      return watch_(y);
    } catch (const Error&) {
      return Watch{-1.0, {}};
    }
  }

  /// Looks for a singular point crossed strictly inside an accepted step:
  /// either a sign change of a watched component, or a minimum of the
  /// watched amplitude that dips below singularity_eps. An Event carries the
  /// step length at which the bad region starts; a Refine carries a shorter
  /// step to retry with.
  struct DipResult {
    enum Action { Event, Refine } action;
    double length;
    Stop stop;
  };

  std::optional<DipResult> interior_event(const OdeState<N>& y,
                                                        const OdeState<N>& k1,
                                                        const Trial& trial, double h) const {
    const Watch w0 = watch_or_bad(y);
    const Watch w1 = watch_or_bad(trial.y);
    for (std::size_t i = 0; i < w0.signs.size(); ++i) {
      if (std::isnan(w0.signs[i]) || std::isnan(w1.signs[i])) continue;
      if ((w0.signs[i] > 0.0) == (w1.signs[i] > 0.0)) continue;
      const bool start_positive = w0.signs[i] > 0.0;
      auto same_side = [&, i](const OdeState<N>& s) {
        if (check_(s)) return false;
        const double v = watch_(s).signs[i];
        return !std::isnan(v) && (v > 0.0) == start_positive;
      };
      const double cut = bisect(y, k1, h, same_side);
      return DipResult{DipResult::Event, cut,
                       Stop{Termination::SingularityEvent, sign_kind_,
                            std::string(sign_detail_) + "xyz"[i]}};
    }

    constexpr double probe = 1e-4;
    const double m0p = watch_or_bad(hermite(y, k1, trial.y, trial.k_last, h, probe)).dip;
    const double m1m = watch_or_bad(hermite(y, k1, trial.y, trial.k_last, h, 1.0 - probe)).dip;
    if (!(m0p < w0.dip && m1m < w1.dip)) return std::nullopt;

    // Golden-section search on the true step map, not the interpolant.
    auto at = [&](double len) {
      try {
        return watch_(step(y, k1, len).y).dip;
      } catch (const Error&) {
        return -1.0;
      }
    };
    constexpr double g = 0.6180339887498949;
    double lo = 0.0;
    double hi = h;
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = at(x1);
    double f2 = at(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * h; ++it) {
      if (f1 < cfg_.singularity_eps || f2 < cfg_.singularity_eps) break;
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = at(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = at(x2);
      }
    }
    const double best = f1 < f2 ? x1 : x2;
    const double lowest = std::min(f1, f2);
    if (lowest < cfg_.singularity_eps) {
      Stop stop{Termination::SingularityEvent, dip_kind_, dip_detail_};
      const double cut = bisect(y, k1, best, [&](const OdeState<N>& s) { return !check_(s); });
      return DipResult{DipResult::Event, cut, stop};
    }
    // A single step cannot resolve a deep, narrow dip; approach it in
    // shorter steps instead.
    if (lowest < 1e-2 * std::min(w0.dip, w1.dip)) {
      return DipResult{DipResult::Refine, 0.5 * best, {}};
    }
    return std::nullopt;
  }

  /// Largest step length in [0, h] (to 1e-3 * h) whose end state is good.
  template <class Good>
  double bisect(const OdeState<N>& y, const OdeState<N>& k1, double h, Good good) const {
    double lo = 0.0;
    double hi = h;
    while (hi - lo > 1e-3 * h) {
      const double mid = 0.5 * (lo + hi);
      bool ok = false;
      try {
        ok = good(step(y, k1, mid).y);
      } catch (const Error&) {
        ok = false;
      }
      (ok ? lo : hi) = mid;
    }
    return lo;
  }

  /// Bisects the step fraction until the good/bad bracket is narrower than
  /// 1e-3 * h and appends the last good state.
  void locate(OdeSolution<N>& out, double t, const OdeState<N>& y, const OdeState<N>& k1,
              double h) const {
    append(out, t, y, k1, bisect(y, k1, h, [&](const OdeState<N>& s) { return !check_(s); }));
  }

  void append(OdeSolution<N>& out, double t, const OdeState<N>& y, const OdeState<N>& k1,
              double len) const {
    if (len > 0.0) {
      out.t.push_back(t + len);
      out.y.push_back(step(y, k1, len).y);
    }
  }

  Rhs rhs_;
  Check check_;
  WatchFn watch_;
  SingularityKind dip_kind_ = SingularityKind::NodalPoint;
  const char* dip_detail_ = "trajectory ran into a nodal point inside a step";
  SingularityKind sign_kind_ = SingularityKind::NodeSingularity;
  const char* sign_detail_ = "trajectory crossed a zero of d S0 / d";
  Locate position_;
  IntegratorConfig cfg_;
};

}  // namespace qhj::detail
