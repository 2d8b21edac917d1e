#pragma once

#include <string>

namespace bestab {

/// Parameters (a, b, c, d) of the four-parameter piecewise-linear hybrid
/// system
///
///   y' = [[a-1, 1, 0], [a-b, 0, 1], [-b, 0, 0]] y   until y1 = 0,
///   y' = [[0, 0, 0], [0, c, 1], [0, -d, 0]] y       until y2 = 0.
///
/// Valid when b > a^2/4, d > 0, and d > c^2/4 whenever c > 0.
struct HybridParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  bool valid() const;
  /// Empty when valid, else a description of the first violated constraint.
  std::string violation() const;
  /// Throws ConstraintViolation when !valid().
  void validate() const;
};

/// Coefficients of the five-parameter hybrid system
///
///   y' = [[tauL, 1, 0], [-sigmaL, 0, 1], [deltaL, 0, 0]] y   until y1 = 0,
///   y' = (0, tauS*y2 + y3, -deltaS*y2)                     until y2 = 0.
///
/// deltaS is the product of the sliding Jacobian's non-zero eigenvalues, the
/// sign that makes the right piece above reproduce d. Note that writing the
/// sliding characteristic polynomial as l^3 - tauS l^2 - deltaS l would give
/// the opposite sign; the right piece as displayed is what is integrated.
struct NormalFormParams {
  double tauL = 0.0;
  double sigmaL = 0.0;
  double deltaL = 0.0;
  double tauS = 0.0;
  double deltaS = 0.0;
};

/// The (a, b, c, d) of the scaled system expressed in the five-parameter form.
NormalFormParams to_normal_form(const HybridParams& p);

}  // namespace bestab
