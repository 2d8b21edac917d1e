#include "bestab/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bestab/errors.hpp"
#include "bestab/secant.hpp"
#include "bestab/spectrum.hpp"

namespace bestab {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

Mat3 left_matrix(const NormalFormParams& nf) {
  Mat3 C;
  C << nf.tauL, 1, 0,
       -nf.sigmaL, 0, 1,
       nf.deltaL, 0, 0;
  return C;
}

std::optional<Termination> norm_check(double n, double t, const Vec3& y, const EventConfig& cfg) {
  if (!(n < cfg.norm_ceiling)) return Termination{TerminationReason::Diverged, t, y};
  if (n < cfg.norm_floor) return Termination{TerminationReason::Converged, t, y};
  return std::nullopt;
}

// Steps a scalar event function g(t) = component of traj(t) at multiples of
// dt until it changes sign in the requested direction, then refines by secant.
template <typename Traj>
HitResult search_event(const Traj& traj, const Vec3& y0, int component, bool upward,
                       bool skip_first_step, double dt, const EventConfig& cfg,
                       Switch kind) {
  if (auto term = norm_check(y0.norm(), 0.0, y0, cfg)) return *term;

  // Sign convention: look for g going from <= 0 to > 0.
  const double sgn = upward ? 1.0 : -1.0;
  double t_prev = 0.0;
  double g_prev = sgn * y0[component];
  for (long k = 1; k <= cfg.max_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Vec3 y = traj(t);
    const double g = sgn * y[component];
    const double n = y.norm();

    if (g > 0 && g_prev <= 0 && !(skip_first_step && k == 1)) {
      auto f = [&](double s) { return sgn * traj(s)[component]; };
      const double ftol = cfg.secant_tol * std::max(1.0, n);
      const SecantResult root =
          secant_bracketed(f, t_prev, t, g_prev, g, ftol, cfg.max_secant_iters);
      Vec3 hit = traj(root.x);
      hit[component] = 0.0;
      return SegmentEvent{root.x, hit, kind};
    }
    if (auto term = norm_check(n, t, y, cfg)) return *term;
    t_prev = t;
    g_prev = g;
  }
  return Termination{TerminationReason::MaxStepsExceeded, t_prev, traj(t_prev)};
}

}  // namespace

void EventConfig::validate() const {
  if (steps_per_rotation <= 0 || !(secant_tol > 0) || max_secant_iters <= 0 ||
      !(norm_floor > 0) || !(norm_floor < 1) || !(norm_ceiling > 1) || max_segments <= 0 ||
      max_steps <= 0)
    throw Error(ErrorKind::ConstraintViolation, "invalid event configuration");
}

const char* to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::Converged: return "converged";
    case TerminationReason::Diverged: return "diverged";
    case TerminationReason::MaxStepsExceeded: return "max steps exceeded";
  }
  return "?";
}

RotationalFlow3 HybridSystem::make_left(const NormalFormParams& nf) {
  const Mat3 C = left_matrix(nf);
  const EigTriple eig = eig3_unchecked(C);
  const auto* rp = std::get_if<RealPlusPair>(&eig);
  if (rp == nullptr || !(rp->beta > 0))
    throw Error(ErrorKind::NotRotational,
                "left matrix has three real eigenvalues; no rotational return map");
  return RotationalFlow3(C, rp->real_eig, rp->alpha, rp->beta);
}

HybridSystem::HybridSystem(const HybridParams& params)
    : nf_((params.validate(), to_normal_form(params))),
      left_(left_matrix(nf_), -1.0, params.a / 2,
            std::sqrt(4 * params.b - params.a * params.a) / 2),
      sliding_(params.c, params.d) {}

HybridSystem::HybridSystem(const NormalFormParams& nf)
    : nf_(nf), left_(make_left(nf)), sliding_(nf.tauS, nf.deltaS) {}

Vec3 HybridSystem::flow_S(const Vec3& y0, double t) const {
  const Vec2 z = sliding_(Vec2(y0[1], y0[2]), t);
  return {0.0, z[0], z[1]};
}

Vec3 HybridSystem::field_L(const Vec3& y) const { return left_.matrix() * y; }

Vec3 HybridSystem::field_S(const Vec3& y) const {
  return {0.0, nf_.tauS * y[1] + y[2], -nf_.deltaS * y[1]};
}

double HybridSystem::step_L(const EventConfig& cfg) const {
  return kTwoPi / (left_.omega() * cfg.steps_per_rotation);
}

double HybridSystem::step_S(const EventConfig& cfg) const {
  if (sliding_.complex_pair()) return kTwoPi / (sliding_.omega() * cfg.steps_per_rotation);
  const double rho = sliding_.spectral_radius();
  const double base = 0.05 * 256.0 / cfg.steps_per_rotation;
  return rho > 0 ? base / rho : base;
}

HitResult HybridSystem::first_hit_sigma(const Vec3& y0, const EventConfig& cfg) const {
  if (y0[0] > 0)
    throw Error(ErrorKind::ConstraintViolation, "left flow must start in y1 <= 0");
  const auto traj = left_.trajectory(y0);
  return search_event(traj, y0, 0, /*upward=*/true, /*skip_first_step=*/y0[0] == 0.0,
                      step_L(cfg), cfg, Switch::LtoS);
}

HitResult HybridSystem::first_hit_gamma(const Vec3& y0, const EventConfig& cfg) const {
  if (std::abs(y0[0]) > 1e-12 * std::max(1.0, y0.norm()) || !(y0[1] > 0))
    throw Error(ErrorKind::ConstraintViolation,
                "sliding flow must start on y1 = 0 with y2 > 0");
  const Vec2 start(y0[1], y0[2]);
  auto traj = [&](double t) {
    const Vec2 z = sliding_(start, t);
    return Vec3(0.0, z[0], z[1]);
  };
  return search_event(traj, Vec3(0.0, y0[1], y0[2]), 1, /*upward=*/false,
                      /*skip_first_step=*/false, step_S(cfg), cfg, Switch::StoL);
}

Vec3 flow_L(const HybridParams& params, const Vec3& y0, double t) {
  return HybridSystem(params).flow_L(y0, t);
}

Vec3 flow_S(const HybridParams& params, const Vec3& y0, double t) {
  if (y0[0] != 0.0)
    throw Error(ErrorKind::ConstraintViolation, "sliding flow must start on y1 = 0");
  return HybridSystem(params).flow_S(y0, t);
}

HitResult first_hit_sigma(const HybridParams& params, const Vec3& y0, const EventConfig& cfg) {
  return HybridSystem(params).first_hit_sigma(y0, cfg);
}

HitResult first_hit_gamma(const HybridParams& params, const Vec3& y0, const EventConfig& cfg) {
  return HybridSystem(params).first_hit_gamma(y0, cfg);
}

ReturnMap return_map_zeta(const HybridSystem& sys, double z, const EventConfig& cfg) {
  if (!(z < 0)) throw Error(ErrorKind::ConstraintViolation, "return map needs z < 0");
  cfg.validate();
  EventConfig scaled = cfg;
  scaled.norm_floor *= -z;
  scaled.norm_ceiling *= -z;

  ReturnMap out;
  const HitResult first = sys.first_hit_sigma(Vec3(0.0, 0.0, z), scaled);
  if (const auto* term = std::get_if<Termination>(&first)) {
    out.termination = *term;
    out.terminated_in = Regime::L;
    return out;
  }
  out.to_sigma = std::get<SegmentEvent>(first);

  if (out.to_sigma->y_hit[1] <= 0.0) {
    // Grazing arrival directly on the line y1 = y2 = 0.
    out.to_gamma = SegmentEvent{0.0, out.to_sigma->y_hit, Switch::StoL};
    out.zeta = out.to_sigma->y_hit[2];
    return out;
  }

  const HitResult second = sys.first_hit_gamma(out.to_sigma->y_hit, scaled);
  if (const auto* term = std::get_if<Termination>(&second)) {
    out.termination = *term;
    out.terminated_in = Regime::S;
    return out;
  }
  out.to_gamma = std::get<SegmentEvent>(second);
  out.zeta = out.to_gamma->y_hit[2];
  return out;
}

ReturnMap return_map_zeta(const HybridParams& params, double z, const EventConfig& cfg) {
  return return_map_zeta(HybridSystem(params), z, cfg);
}

const char* to_string(LambdaResult::Kind k) {
  switch (k) {
    case LambdaResult::Kind::Defined: return "defined";
    case LambdaResult::Kind::UndefinedConverged: return "undefined (converged)";
    case LambdaResult::Kind::UndefinedDiverged: return "undefined (diverged)";
    case LambdaResult::Kind::Marginal: return "marginal";
  }
  return "?";
}

std::string describe(const LambdaResult& r) {
  std::ostringstream os;
  os.precision(15);
  os << "Lambda " << to_string(r.kind);
  if (r.defined()) os << " = " << r.value;
  if (!r.diagnostic.empty()) os << " [" << r.diagnostic << "]";
  return os.str();
}

const char* stability_of(const LambdaResult& r) {
  switch (r.kind) {
    case LambdaResult::Kind::Defined: return r.value < 1 ? "asymptotically stable" : "unstable";
    case LambdaResult::Kind::UndefinedConverged: return "asymptotically stable";
    case LambdaResult::Kind::UndefinedDiverged: return "unstable";
    case LambdaResult::Kind::Marginal: return "undetermined (Lambda = 1)";
  }
  return "?";
}

LambdaResult lambda(const HybridSystem& sys, const EventConfig& cfg) {
  const ReturnMap rm = return_map_zeta(sys, -1.0, cfg);
  if (rm.zeta) {
    const double value = -*rm.zeta;
    const auto kind = std::abs(value - 1) <= kMarginalBand ? LambdaResult::Kind::Marginal
                                                           : LambdaResult::Kind::Defined;
    return {kind, value, {}};
  }
  const Termination& term = *rm.termination;
  std::string diag = std::string(to_string(term.reason)) + " during the " +
                     (rm.terminated_in == Regime::L ? "left" : "sliding") + " segment";
  const auto kind = term.reason == TerminationReason::Converged
                        ? LambdaResult::Kind::UndefinedConverged
                        : LambdaResult::Kind::UndefinedDiverged;
  return {kind, 0.0, diag};
}

LambdaResult lambda(const HybridParams& params, const EventConfig& cfg) {
  return lambda(HybridSystem(params), cfg);
}

LambdaResult lambda_from_normal_form(const NormalFormParams& nf, const EventConfig& cfg) {
  return lambda(HybridSystem(nf), cfg);
}

Orbit hybrid_orbit(const HybridSystem& sys, const Vec3& y0, double t_max,
                   const EventConfig& cfg, int samples_per_rotation) {
  if (y0[0] > 0) throw Error(ErrorKind::ConstraintViolation, "hybrid orbit needs y1 <= 0");
  cfg.validate();
  EventConfig sample_cfg = cfg;
  sample_cfg.steps_per_rotation = samples_per_rotation;

  Orbit orbit;
  Regime regime = (y0[0] == 0.0 && y0[1] > 0) ? Regime::S : Regime::L;
  Vec3 y = y0;
  double t0 = 0.0;

  for (int seg = 0; seg < cfg.max_segments; ++seg) {
    const HitResult hit = regime == Regime::L ? sys.first_hit_sigma(y, cfg)
                                              : sys.first_hit_gamma(y, cfg);
    const auto* ev = std::get_if<SegmentEvent>(&hit);
    const auto* term = std::get_if<Termination>(&hit);
    const double seg_end = ev ? ev->t_hit : term->t;
    const double dt = regime == Regime::L ? sys.step_L(sample_cfg) : sys.step_S(sample_cfg);

    auto at = [&](double s) { return regime == Regime::L ? sys.flow_L(y, s) : sys.flow_S(y, s); };
    const double stop = std::min(seg_end, t_max - t0);

    OrbitSegment segment{regime, {}};
    segment.samples.push_back({t0, y});
    for (long k = 1; k * dt < stop; ++k) segment.samples.push_back({t0 + k * dt, at(k * dt)});

    if (t_max - t0 <= seg_end) {
      if (stop > segment.samples.back().t - t0) segment.samples.push_back({t0 + stop, at(stop)});
      orbit.segments.push_back(std::move(segment));
      orbit.terminal = OrbitTerminal::Timeout;
      return orbit;
    }
    if (term) {
      segment.samples.push_back({t0 + seg_end, term->y});
      orbit.segments.push_back(std::move(segment));
      orbit.terminal = term->reason == TerminationReason::Converged ? OrbitTerminal::Converged
                                                                    : OrbitTerminal::Diverged;
      orbit.diagnostic = to_string(term->reason);
      return orbit;
    }

    // End just short of the switch; the next segment starts on it.
    const double before = seg_end - 1e-10;
    if (before > segment.samples.back().t - t0)
      segment.samples.push_back({t0 + before, at(before)});
    orbit.segments.push_back(std::move(segment));

    t0 += seg_end;
    y = ev->y_hit;
    if (regime == Regime::L && y[1] <= 0) {
      regime = Regime::L;  // grazing: stays on the left piece
    } else {
      regime = regime == Regime::L ? Regime::S : Regime::L;
    }
  }
  orbit.terminal = OrbitTerminal::Timeout;
  orbit.diagnostic = "segment limit reached";
  return orbit;
}

}  // namespace bestab
