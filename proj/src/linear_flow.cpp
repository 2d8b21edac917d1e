#include "bestab/linear_flow.hpp"

#include <cmath>

namespace bestab {

RotationalFlow3::RotationalFlow3(const Mat3& C, double r, double mu, double omega)
    : C_(C), r_(r), mu_(mu), omega_(omega) {
  const Mat3 shifted = C - mu * Mat3::Identity();
  proj_ = (shifted * shifted + omega * omega * Mat3::Identity()) /
          ((r - mu) * (r - mu) + omega * omega);
}

RotationalFlow3::Trajectory RotationalFlow3::trajectory(const Vec3& y0) const {
  Trajectory tr;
  tr.r_ = r_;
  tr.mu_ = mu_;
  tr.omega_ = omega_;
  tr.line_ = proj_ * y0;
  tr.plane_ = y0 - tr.line_;
  tr.plane_rot_ = (C_ * tr.plane_ - mu_ * tr.plane_) / omega_;
  return tr;
}

Vec3 RotationalFlow3::Trajectory::operator()(double t) const {
  const double th = omega_ * t;
  return std::exp(r_ * t) * line_ +
         std::exp(mu_ * t) * (std::cos(th) * plane_ + std::sin(th) * plane_rot_);
}

PlanarFlow::PlanarFlow(double tau, double delta)
    : tau_(tau), delta_(delta), mu_(tau / 2), kappa2_(tau * tau / 4 - delta) {}

double PlanarFlow::omega() const { return kappa2_ < 0 ? std::sqrt(-kappa2_) : 0.0; }

double PlanarFlow::spectral_radius() const {
  if (kappa2_ < 0) return std::sqrt(delta_);
  return std::abs(mu_) + std::sqrt(kappa2_);
}

Vec2 PlanarFlow::operator()(const Vec2& y0, double t) const {
  // (M - mu) y0
  const Vec2 n(y0[0] * (tau_ - mu_) + y0[1], -delta_ * y0[0] - mu_ * y0[1]);
  double ec, es;  // e^{mu t} c(t), e^{mu t} s(t)
  if (kappa2_ < 0) {
    const double w = std::sqrt(-kappa2_);
    const double e = std::exp(mu_ * t);
    ec = e * std::cos(w * t);
    es = e * std::sin(w * t) / w;
  } else if (kappa2_ == 0) {
    const double e = std::exp(mu_ * t);
    ec = e;
    es = e * t;
  } else {
    const double k = std::sqrt(kappa2_);
    if (k * t < 1.0) {
      const double e = std::exp(mu_ * t);
      ec = e * std::cosh(k * t);
      es = e * std::sinh(k * t) / k;
    } else {
      const double ep = std::exp((mu_ + k) * t);
      const double em = std::exp((mu_ - k) * t);
      ec = (ep + em) / 2;
      es = (ep - em) / (2 * k);
    }
  }
  return ec * y0 + es * n;
}

}  // namespace bestab
