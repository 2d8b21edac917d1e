#pragma once

// The piecewise-linear hybrid system
//
//   y' = C y                            until y1 = 0   (left piece, "L")
//   y' = (0, tauS y2 + y3, -deltaS y2)  until y2 = 0   (sliding piece, "S")
//
// with C = [[tauL, 1, 0], [-sigmaL, 0, 1], [deltaL, 0, 0]], in either its
// five-parameter form or the four-parameter (a, b, c, d) form. Orbits switch
// L -> S on the plane y1 = 0 and S -> L on the line y1 = y2 = 0. The first
// return map to that line is zeta(z) = Lambda z on z < 0.

#include <optional>
#include <string>
#include <variant>

#include "bestab/linalg.hpp"
#include "bestab/linear_flow.hpp"
#include "bestab/orbit.hpp"
#include "bestab/params.hpp"

namespace bestab {

struct EventConfig {
  int steps_per_rotation = 256;
  double secant_tol = 1e-12;
  int max_secant_iters = 60;
  double norm_floor = 1e-6;
  double norm_ceiling = 1e6;
  int max_segments = 10000;
  long max_steps = 10'000'000;

  /// Throws ConstraintViolation unless all positive and floor < 1 < ceiling.
  void validate() const;
};

enum class Switch { LtoS, StoL };

struct SegmentEvent {
  double t_hit;  // time since the segment started
  Vec3 y_hit;
  Switch kind;
};

enum class TerminationReason { Converged, Diverged, MaxStepsExceeded };

const char* to_string(TerminationReason r);

struct Termination {
  TerminationReason reason;
  double t;
  Vec3 y;
};

using HitResult = std::variant<SegmentEvent, Termination>;

class HybridSystem {
 public:
  /// Throws ConstraintViolation for invalid parameters.
  explicit HybridSystem(const HybridParams& params);
  /// Throws NotRotational when the left matrix has no complex pair.
  explicit HybridSystem(const NormalFormParams& nf);

  const NormalFormParams& normal_form() const { return nf_; }
  const RotationalFlow3& left() const { return left_; }
  const PlanarFlow& sliding() const { return sliding_; }

  Vec3 flow_L(const Vec3& y0, double t) const { return left_(y0, t); }
  /// Requires y0[0] == 0; the first component stays 0.
  Vec3 flow_S(const Vec3& y0, double t) const;

  Vec3 field_L(const Vec3& y) const;
  Vec3 field_S(const Vec3& y) const;

  /// Stepping interval for event search on each piece.
  double step_L(const EventConfig& cfg) const;
  double step_S(const EventConfig& cfg) const;

  /// First t > 0 at which the left flow from y0 (y0[0] <= 0) reaches y1 = 0.
  HitResult first_hit_sigma(const Vec3& y0, const EventConfig& cfg) const;
  /// First t > 0 at which the sliding flow from y0 (y0[0] = 0, y0[1] > 0)
  /// reaches y2 = 0.
  HitResult first_hit_gamma(const Vec3& y0, const EventConfig& cfg) const;

 private:
  static RotationalFlow3 make_left(const NormalFormParams& nf);

  NormalFormParams nf_;
  RotationalFlow3 left_;
  PlanarFlow sliding_;
};

// Free-function forms over (a, b, c, d).
Vec3 flow_L(const HybridParams& params, const Vec3& y0, double t);
Vec3 flow_S(const HybridParams& params, const Vec3& y0, double t);
HitResult first_hit_sigma(const HybridParams& params, const Vec3& y0, const EventConfig& cfg);
HitResult first_hit_gamma(const HybridParams& params, const Vec3& y0, const EventConfig& cfg);

/// One application of the return map from (0, 0, z), z < 0.
struct ReturnMap {
  std::optional<double> zeta;  // set when both switches happen
  std::optional<SegmentEvent> to_sigma;
  std::optional<SegmentEvent> to_gamma;
  std::optional<Termination> termination;
  Regime terminated_in = Regime::L;  // meaningful with termination
};

/// Norm thresholds are scaled by |z| so that zeta(nu z) = nu zeta(z) holds
/// for every outcome, not just returning ones.
ReturnMap return_map_zeta(const HybridSystem& sys, double z, const EventConfig& cfg = {});
ReturnMap return_map_zeta(const HybridParams& params, double z, const EventConfig& cfg = {});

struct LambdaResult {
  enum class Kind { Defined, UndefinedConverged, UndefinedDiverged, Marginal };
  Kind kind;
  double value = 0.0;  // Defined and Marginal
  std::string diagnostic;

  bool defined() const { return kind == Kind::Defined || kind == Kind::Marginal; }
};

/// |Lambda - 1| at or below this is Marginal.
inline constexpr double kMarginalBand = 1e-9;

const char* to_string(LambdaResult::Kind k);
std::string describe(const LambdaResult& r);
/// "asymptotically stable", "unstable" or "undetermined (Lambda = 1)".
const char* stability_of(const LambdaResult& r);

LambdaResult lambda(const HybridSystem& sys, const EventConfig& cfg = {});
/// Lambda = -zeta(-1). Throws ConstraintViolation for invalid parameters.
LambdaResult lambda(const HybridParams& params, const EventConfig& cfg = {});
LambdaResult lambda_from_normal_form(const NormalFormParams& nf, const EventConfig& cfg = {});

/// Closed-form orbit from y0 (y0[0] <= 0) up to t_max, sampled
/// samples_per_rotation times per rotation of each piece.
Orbit hybrid_orbit(const HybridSystem& sys, const Vec3& y0, double t_max,
                   const EventConfig& cfg = {}, int samples_per_rotation = 64);

}  // namespace bestab
