#pragma once

#include "bestab/linalg.hpp"

namespace bestab {

/// exp(C t) y0 for a 3x3 matrix C with one real eigenvalue r and a complex
/// pair mu +- i omega (omega > 0). With P the spectral projector onto the
/// r-eigenline,
///
///   P = ((C - mu)^2 + omega^2) / ((r - mu)^2 + omega^2),
///   exp(C t) = e^{r t} P + e^{mu t} (cos(omega t) + sin(omega t)(C - mu)/omega)(I - P).
class RotationalFlow3 {
 public:
  RotationalFlow3(const Mat3& C, double r, double mu, double omega);

  double real_eig() const { return r_; }
  double mu() const { return mu_; }
  double omega() const { return omega_; }
  const Mat3& matrix() const { return C_; }

  /// Orbit of one initial condition, decomposed once and evaluated at any t.
  class Trajectory {
   public:
    Vec3 operator()(double t) const;

   private:
    friend class RotationalFlow3;
    double r_, mu_, omega_;
    Vec3 line_, plane_, plane_rot_;
  };

  Trajectory trajectory(const Vec3& y0) const;
  Vec3 operator()(const Vec3& y0, double t) const { return trajectory(y0)(t); }

 private:
  Mat3 C_;
  double r_, mu_, omega_;
  Mat3 proj_;
};

/// exp(M t) y0 for M = [[tau, 1], [-delta, 0]], eigenvalues roots of
/// l^2 - tau l + delta. Written as e^{mu t}(c(t) I + s(t)(M - mu)) with
/// mu = tau/2, which covers the complex, real and repeated cases in one form.
class PlanarFlow {
 public:
  PlanarFlow(double tau, double delta);

  bool complex_pair() const { return kappa2_ < 0; }
  /// Rotation rate when complex, 0 otherwise.
  double omega() const;
  /// Largest eigenvalue modulus.
  double spectral_radius() const;

  Vec2 operator()(const Vec2& y0, double t) const;

 private:
  double tau_, delta_, mu_, kappa2_;
};

}  // namespace bestab
