#pragma once

// Fixed-step RK4 integration of Filippov systems and of the hybrid system,
// with events located by bisection on the step fraction. None of this uses
// the closed-form flows in hybrid.hpp, which it exists to cross-check.

#include <vector>

#include "bestab/filippov.hpp"
#include "bestab/hybrid.hpp"
#include "bestab/orbit.hpp"

namespace bestab {

struct SimConfig {
  double dt = 1e-3;
  double event_refine_tol = 1e-10;
  double t_max = 100.0;
  double norm_floor = 1e-6;
  double norm_ceiling = 1e6;
  /// Norms are measured from here (the equilibrium of interest).
  Vec3 center = Vec3::Zero();
  /// Sliding samples are projected back to |H| below this.
  double on_surface_tol = 1e-8;
  /// Keep every k-th step as a sample; switch points are always kept.
  int record_every = 1;
  /// Stop with ReachedEvent after this many sliding -> left exits (0: never).
  int stop_after_sliding_exits = 0;

  void validate() const;
};

/// Filippov semantics: fL in H < 0, fR in H > 0, the sliding vector field on
/// attracting sliding parts of H = 0. Crossing regions are passed through,
/// sliding ends at visible folds (v_L reaching 0) or where v_R reaches 0.
/// Throws RepellingSlidingEncountered, SimultaneousEvents, NonFiniteState.
Orbit simulate(const FilippovSystem& system, const Vec3& x0, const SimConfig& cfg);

/// The hybrid system integrated from its vector fields alone. Sliding
/// segments start where y1 reaches 0 and end where y2 reaches 0.
Orbit simulate_hybrid(const HybridSystem& sys, const Vec3& y0, const SimConfig& cfg);

/// Lambda = -(third coordinate on the first return to y1 = y2 = 0) by direct
/// integration from (0, 0, -1).
LambdaResult estimate_lambda_empirical(const HybridSystem& sys, const SimConfig& cfg = {});
LambdaResult estimate_lambda_empirical(const HybridParams& params, const SimConfig& cfg = {});

/// Same quantity from the boundary-equilibrium normal form treated as a
/// Filippov system (its sliding motion is the hybrid S piece up to time
/// reparametrisation).
LambdaResult estimate_lambda_filippov(const NormalFormParams& nf, const SimConfig& cfg = {});

/// n points on the tangency curve {H = 0, v_L = 0} at arc lengths evenly
/// spaced in [-arc_span, arc_span] around x*, in order. Predictor along
/// grad H x grad v_L, Newton corrector on (H, v_L) in the normal plane.
/// Throws CorrectionDiverged.
std::vector<Vec3> trace_gamma(const FilippovSystem& system, const BoundaryData& bd,
                              double arc_span, int n);

}  // namespace bestab
