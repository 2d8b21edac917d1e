#pragma once

#include "bestab/fields.hpp"
#include "bestab/linalg.hpp"
#include "bestab/params.hpp"
#include "bestab/system_spec.hpp"

namespace bestab {

/// Absolute tolerance for "is an equilibrium" and "lies on the surface".
inline constexpr double kEqTol = 1e-8;
/// Relative tolerance for sign classifications (v_L, v_R, w_L, p^T q).
inline constexpr double kTangencyTol = 1e-9;

/// x' = fL(x) where H(x) < 0, x' = fR(x) where H(x) > 0.
struct FilippovSystem {
  VectorFieldSpec fL;
  VectorFieldSpec fR;
  ScalarFieldSpec H;

  static FilippovSystem from_spec(const SystemSpec& spec) { return {spec.fL, spec.fR, spec.H}; }

  Vec3 grad_H(const Vec3& x) const { return gradient_fd(H, x); }
};

/// Quantities at a boundary equilibrium x* (fL(x*) = 0, H(x*) = 0).
struct BoundaryData {
  Vec3 x_star;
  Vec3 p;    // grad H(x*)
  Vec3 q;    // fR(x*)
  Mat3 A;    // D fL(x*)
  Mat3 B;    // (I - q p^T / p^T q) A
  Mat3 Phi;  // rows p^T, p^T A, p^T A^2
  double det_Phi;
  double pTq;

  /// det(Phi) is zero relative to the product of its row norms, i.e. some
  /// eigenvector of A is orthogonal to p.
  bool observability_degenerate() const;
};

BoundaryData boundary_data(const FilippovSystem& system, const Vec3& x_star);

/// Boundary data of the truncated system u' = A u | q, switching on p^T u.
BoundaryData boundary_data_linear(const Vec3& p, const Vec3& q, const Mat3& A,
                                  const Vec3& x_star = Vec3::Zero());

struct VFields {
  double vL;
  double vR;
};

/// Rates of change of H along fL and fR.
VFields v_fields(const FilippovSystem& system, const Vec3& x);

enum class RegionKind { Crossing, AttractingSliding, RepellingSliding, Tangency };
enum class FoldKind { VisibleFold, InvisibleFold, DegenerateFold };

const char* to_string(RegionKind k);
const char* to_string(FoldKind k);

/// Requires |H(x)| <= kEqTol, else NotOnSurface.
RegionKind classify_region(const FilippovSystem& system, const Vec3& x);

/// Second time derivative of H along fL: grad(v_L) . fL.
double w_L(const FilippovSystem& system, const Vec3& x);

/// Requires x on the tangency curve (|H|, |v_L| <= kEqTol), else NotOnTangencyCurve.
FoldKind classify_fold(const FilippovSystem& system, const Vec3& x);

/// (v_L fR - v_R fL) / (v_L - v_R). Evaluated wherever the denominator is
/// non-degenerate; callers keep x on the surface.
Vec3 sliding_vf(const FilippovSystem& system, const Vec3& x);

// Constructed systems ---------------------------------------------------------

/// fL = A (x - x*), fR = q, H = p^T (x - x*) written out as expressions.
FilippovSystem make_linear_system(const Mat3& A, const Vec3& q, const Vec3& p,
                                  const Vec3& x_star = Vec3::Zero());

/// The boundary-equilibrium normal form: H = x1,
/// fL = (tauL x1 + x2, -sigmaL x1 + x3, deltaL x1), fR = (-1, tauS, -deltaS).
FilippovSystem make_normal_form_system(const NormalFormParams& nf);

}  // namespace bestab
