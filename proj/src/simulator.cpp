#include "bestab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "bestab/errors.hpp"

namespace bestab {
namespace {

template <typename F>
Vec3 rk4(const F& f, const Vec3& x, double h) {
  const Vec3 k1 = f(x);
  const Vec3 k2 = f(x + 0.5 * h * k1);
  const Vec3 k3 = f(x + 0.5 * h * k2);
  const Vec3 k4 = f(x + h * k3);
  return x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

// Shrinks [lo, hi] around the first switch of fired(s) from false to true.
template <typename Pred>
std::pair<double, double> bisect(const Pred& fired, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (fired(mid))
      hi = mid;
    else
      lo = mid;
  }
  return {lo, hi};
}

Vec3 project_to_surface(const FilippovSystem& sys, Vec3 x, double tol) {
  for (int it = 0; it < 5; ++it) {
    const double h = sys.H(x);
    if (std::abs(h) <= 1e-3 * tol) break;
    const Vec3 g = sys.grad_H(x);
    x -= h * g / g.squaredNorm();
  }
  return x;
}

Regime surface_regime(const FilippovSystem& sys, const Vec3& x) {
  const Vec3 g = sys.grad_H(x);
  const Vec3 fl = sys.fL(x);
  const Vec3 fr = sys.fR(x);
  const double vL = g.dot(fl);
  const double vR = g.dot(fr);
  const bool l_tan = std::abs(vL) <= kTangencyTol * g.norm() * fl.norm();
  const bool r_tan = std::abs(vR) <= kTangencyTol * g.norm() * fr.norm();

  if (!l_tan && !r_tan) {
    if (vL > 0 && vR < 0) return Regime::S;
    if (vL < 0 && vR > 0)
      throw Error(ErrorKind::RepellingSlidingEncountered,
                  "orbit reached a repelling sliding region");
    return vL > 0 ? Regime::R : Regime::L;
  }
  if (l_tan && !r_tan) {
    if (vR > 0) return Regime::R;
    return w_L(sys, x) < 0 ? Regime::L : Regime::S;
  }
  if (r_tan && !l_tan) return vL > 0 ? Regime::R : Regime::L;
  return Regime::L;
}

void require_finite(const Vec3& x, double t) {
  if (!x.allFinite())
    throw Error(ErrorKind::NonFiniteState, "state became non-finite at t = " + std::to_string(t));
}

// Segment bookkeeping shared by both integrators.
class OrbitBuilder {
 public:
  explicit OrbitBuilder(int record_every) : record_every_(record_every) {}

  void start(Regime r, double t, const Vec3& x) {
    orbit_.segments.push_back({r, {{t, x}}});
    steps_ = 0;
  }
  void step(double t, const Vec3& x) {
    if (++steps_ % record_every_ == 0) orbit_.segments.back().samples.push_back({t, x});
  }
  void close(double t, const Vec3& x) {
    auto& s = orbit_.segments.back().samples;
    if (s.back().t < t) s.push_back({t, x});
  }
  Orbit finish(OrbitTerminal terminal, std::string diagnostic, double t, const Vec3& x) {
    close(t, x);
    orbit_.terminal = terminal;
    orbit_.diagnostic = std::move(diagnostic);
    return std::move(orbit_);
  }

 private:
  Orbit orbit_;
  int record_every_;
  long steps_ = 0;
};

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0) || !(event_refine_tol > 0) || !(event_refine_tol < dt) || !(t_max > 0) ||
      !(norm_floor > 0) || !(norm_ceiling > norm_floor) || !(on_surface_tol > 0) ||
      record_every <= 0 || stop_after_sliding_exits < 0)
    throw Error(ErrorKind::ConstraintViolation, "invalid simulation configuration");
}

Orbit simulate(const FilippovSystem& sys, const Vec3& x0, const SimConfig& cfg) {
  cfg.validate();
  require_finite(x0, 0.0);

  auto field = [&](Regime r) {
    return [&sys, r](const Vec3& y) -> Vec3 {
      switch (r) {
        case Regime::L: return sys.fL(y);
        case Regime::R: return sys.fR(y);
        case Regime::S: return sliding_vf(sys, y);
      }
      return Vec3::Zero();
    };
  };

  double t = 0.0;
  Vec3 x = x0;
  Regime regime;
  const double h0 = sys.H(x);
  if (h0 < -cfg.on_surface_tol) {
    regime = Regime::L;
  } else if (h0 > cfg.on_surface_tol) {
    regime = Regime::R;
  } else {
    x = project_to_surface(sys, x, cfg.on_surface_tol);
    regime = surface_regime(sys, x);
  }

  OrbitBuilder out(cfg.record_every);
  out.start(regime, t, x);
  int sliding_exits = 0;

  for (;;) {
    const double dist = (x - cfg.center).norm();
    if (dist < cfg.norm_floor) return out.finish(OrbitTerminal::Converged, {}, t, x);
    if (!(dist < cfg.norm_ceiling)) return out.finish(OrbitTerminal::Diverged, {}, t, x);
    if (t >= cfg.t_max) return out.finish(OrbitTerminal::Timeout, {}, t, x);

    const double h = std::min(cfg.dt, cfg.t_max - t);
    const auto f = field(regime);

    if (regime != Regime::S) {
      const bool left = regime == Regime::L;
      auto crossed = [&](const Vec3& y) { return left ? sys.H(y) > 0 : sys.H(y) < 0; };
      const Vec3 xn = rk4(f, x, h);
      require_finite(xn, t + h);
      if (!crossed(xn)) {
        t += h;
        x = xn;
        out.step(t, x);
        continue;
      }
      auto [slo, shi] = bisect([&](double s) { return crossed(rk4(f, x, s)); }, 0.0, h,
                               cfg.event_refine_tol);
      const Vec3 x_lo = rk4(f, x, slo);
      const Vec3 x_hi = rk4(f, x, shi);
      const Vec3 xs = project_to_surface(sys, x_hi, cfg.on_surface_tol);
      const Regime next = surface_regime(sys, xs);
      if (next == regime) {
        // Touched the surface and turned back.
        t += shi;
        x = xs;
        out.step(t, x);
        continue;
      }
      out.close(t + slo, x_lo);
      t += shi;
      x = next == Regime::S ? xs : x_hi;
      regime = next;
      out.start(regime, t, x);
      continue;
    }

    // Sliding.
    auto slide = [&](double s) {
      return project_to_surface(sys, rk4(f, x, s), cfg.on_surface_tol);
    };
    auto exits_left = [&](const Vec3& y) { return v_fields(sys, y).vL < 0; };
    auto exits_right = [&](const Vec3& y) { return v_fields(sys, y).vR > 0; };

    const Vec3 xn = slide(h);
    require_finite(xn, t + h);
    const bool fire_l = exits_left(xn);
    const bool fire_r = exits_right(xn);
    if (!fire_l && !fire_r) {
      t += h;
      x = xn;
      out.step(t, x);
      continue;
    }

    std::pair<double, double> ev_l{h, h}, ev_r{h, h};
    if (fire_l)
      ev_l = bisect([&](double s) { return exits_left(slide(s)); }, 0.0, h, cfg.event_refine_tol);
    if (fire_r)
      ev_r = bisect([&](double s) { return exits_right(slide(s)); }, 0.0, h,
                    cfg.event_refine_tol);
    if (fire_l && fire_r && std::abs(ev_l.second - ev_r.second) <= cfg.event_refine_tol)
      throw Error(ErrorKind::SimultaneousEvents,
                  "sliding ends on both sides at once at t = " + std::to_string(t));

    const bool to_left = fire_l && (!fire_r || ev_l.second < ev_r.second);
    const auto [slo, shi] = to_left ? ev_l : ev_r;
    out.close(t + slo, slide(slo));
    t += shi;
    x = slide(shi);
    regime = to_left ? Regime::L : Regime::R;
    out.start(regime, t, x);
    if (to_left && cfg.stop_after_sliding_exits > 0 &&
        ++sliding_exits >= cfg.stop_after_sliding_exits)
      return out.finish(OrbitTerminal::ReachedEvent, "sliding exit at a visible fold", t, x);
  }
}

Orbit simulate_hybrid(const HybridSystem& sys, const Vec3& y0, const SimConfig& cfg) {
  cfg.validate();
  require_finite(y0, 0.0);
  if (y0[0] > 0) throw Error(ErrorKind::ConstraintViolation, "hybrid orbit needs y1 <= 0");

  const auto gL = [&](const Vec3& y) { return sys.field_L(y); };
  const auto gS = [&](const Vec3& y) { return sys.field_S(y); };

  double t = 0.0;
  Vec3 x = y0;
  Regime regime = (y0[0] == 0.0 && y0[1] > 0) ? Regime::S : Regime::L;
  OrbitBuilder out(cfg.record_every);
  out.start(regime, t, x);
  int returns = 0;

  for (;;) {
    const double dist = (x - cfg.center).norm();
    if (dist < cfg.norm_floor) return out.finish(OrbitTerminal::Converged, {}, t, x);
    if (!(dist < cfg.norm_ceiling)) return out.finish(OrbitTerminal::Diverged, {}, t, x);
    if (t >= cfg.t_max) return out.finish(OrbitTerminal::Timeout, {}, t, x);

    const double h = std::min(cfg.dt, cfg.t_max - t);
    if (regime == Regime::L) {
      auto crossed = [](const Vec3& y) { return y[0] > 0; };
      const Vec3 xn = rk4(gL, x, h);
      require_finite(xn, t + h);
      if (!crossed(xn)) {
        t += h;
        x = xn;
        out.step(t, x);
        continue;
      }
      auto [slo, shi] = bisect([&](double s) { return crossed(rk4(gL, x, s)); }, 0.0, h,
                               cfg.event_refine_tol);
      Vec3 hit = rk4(gL, x, shi);
      hit[0] = 0.0;
      if (hit[1] <= 0) {
        t += shi;
        x = hit;
        out.step(t, x);
        continue;
      }
      out.close(t + slo, rk4(gL, x, slo));
      t += shi;
      x = hit;
      regime = Regime::S;
      out.start(regime, t, x);
    } else {
      auto crossed = [](const Vec3& y) { return y[1] < 0; };
      const Vec3 xn = rk4(gS, x, h);
      require_finite(xn, t + h);
      if (!crossed(xn)) {
        t += h;
        x = xn;
        out.step(t, x);
        continue;
      }
      auto [slo, shi] = bisect([&](double s) { return crossed(rk4(gS, x, s)); }, 0.0, h,
                               cfg.event_refine_tol);
      Vec3 hit = rk4(gS, x, shi);
      hit[1] = 0.0;
      out.close(t + slo, rk4(gS, x, slo));
      t += shi;
      x = hit;
      regime = Regime::L;
      out.start(regime, t, x);
      if (cfg.stop_after_sliding_exits > 0 && ++returns >= cfg.stop_after_sliding_exits)
        return out.finish(OrbitTerminal::ReachedEvent, "returned to y1 = y2 = 0", t, x);
    }
  }
}

namespace {

LambdaResult lambda_from_orbit(const Orbit& orbit) {
  switch (orbit.terminal) {
    case OrbitTerminal::ReachedEvent: {
      const double value = -orbit.back().x[2];
      const auto kind = std::abs(value - 1) <= kMarginalBand ? LambdaResult::Kind::Marginal
                                                             : LambdaResult::Kind::Defined;
      return {kind, value, {}};
    }
    case OrbitTerminal::Converged:
      return {LambdaResult::Kind::UndefinedConverged, 0.0, "converged before returning"};
    case OrbitTerminal::Diverged:
      return {LambdaResult::Kind::UndefinedDiverged, 0.0, "diverged before returning"};
    case OrbitTerminal::Timeout:
      break;
  }
  return {LambdaResult::Kind::UndefinedDiverged, 0.0, "no return before t_max"};
}

}  // namespace

LambdaResult estimate_lambda_empirical(const HybridSystem& sys, const SimConfig& cfg) {
  SimConfig c = cfg;
  c.stop_after_sliding_exits = 1;
  c.record_every = 1 << 20;
  return lambda_from_orbit(simulate_hybrid(sys, Vec3(0, 0, -1), c));
}

LambdaResult estimate_lambda_empirical(const HybridParams& params, const SimConfig& cfg) {
  return estimate_lambda_empirical(HybridSystem(params), cfg);
}

LambdaResult estimate_lambda_filippov(const NormalFormParams& nf, const SimConfig& cfg) {
  SimConfig c = cfg;
  c.stop_after_sliding_exits = 1;
  c.record_every = 1 << 20;
  return lambda_from_orbit(simulate(make_normal_form_system(nf), Vec3(0, 0, -1), c));
}

std::vector<Vec3> trace_gamma(const FilippovSystem& sys, const BoundaryData& bd,
                              double arc_span, int n) {
  if (n < 2 || !(arc_span > 0))
    throw Error(ErrorKind::ConstraintViolation, "trace_gamma needs n >= 2 and arc_span > 0");
  if (bd.observability_degenerate())
    throw Error(ErrorKind::ConstraintViolation,
                "tangency curve is not regular at x* (det Phi = 0)");

  auto vL = [&](const Vec3& y) { return sys.grad_H(y).dot(sys.fL(y)); };
  auto grad_vL = [&](const Vec3& y) { return central_gradient(vL, y, 1e-4); };

  auto tangent = [&](const Vec3& y, const Vec3& prev) {
    Vec3 tau = sys.grad_H(y).cross(grad_vL(y));
    tau.normalize();
    return tau.dot(prev) < 0 ? Vec3(-tau) : tau;
  };

  auto correct = [&](const Vec3& pred, const Vec3& tau) {
    Vec3 x = pred;
    for (int it = 0; it < 30; ++it) {
      const Vec3 F(sys.H(x), vL(x), tau.dot(x - pred));
      const double scale = 1.0 + x.norm();
      if (std::abs(F[0]) + std::abs(F[1]) <= 1e-14 * scale && std::abs(F[2]) <= 1e-14 * scale)
        return x;
      Mat3 J;
      J.row(0) = sys.grad_H(x).transpose();
      J.row(1) = grad_vL(x).transpose();
      J.row(2) = tau.transpose();
      const Vec3 dx = J.fullPivLu().solve(-F);
      if (!dx.allFinite()) break;
      x += dx;
      if (dx.norm() <= 1e-15 * scale) return x;
    }
    if (std::abs(sys.H(x)) + std::abs(vL(x)) <= 1e-10 * (1.0 + x.norm())) return x;
    throw Error(ErrorKind::CorrectionDiverged, "tangency-curve corrector failed to converge");
  };

  // Arc positions -span .. span; march outward from x* on each side.
  std::vector<double> s(n);
  for (int k = 0; k < n; ++k) s[k] = -arc_span + 2.0 * arc_span * k / (n - 1);

  const Vec3 tau0 = bd.p.cross(bd.A.transpose() * bd.p).normalized();
  std::vector<Vec3> pts(n);
  for (int side : {+1, -1}) {
    Vec3 x = bd.x_star;
    Vec3 tau = side * tau0;
    double pos = 0.0;
    for (int k = side > 0 ? 0 : n - 1; k >= 0 && k < n; k += side > 0 ? 1 : -1) {
      const double target = side * s[k];
      if (target < 0) continue;  // other side
      if (target == 0.0) {
        pts[k] = bd.x_star;
        continue;
      }
      // Sub-steps keep the predictor close to the curve.
      const int sub = std::max(1, static_cast<int>(std::ceil((target - pos) / (arc_span / 16))));
      const double ds = (target - pos) / sub;
      for (int j = 0; j < sub; ++j) {
        tau = tangent(x, tau);
        x = correct(x + ds * tau, tau);
      }
      pos = target;
      pts[k] = x;
    }
  }
  return pts;
}

}  // namespace bestab
