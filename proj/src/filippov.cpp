#include "bestab/filippov.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "bestab/errors.hpp"

namespace bestab {
namespace {

// Outer step for differentiating v_L, which is itself a central difference.
constexpr double kNestedFdRelStep = 1e-4;

std::string number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  return v < 0 ? "(" + s + ")" : s;
}

// "x1 - s" with the shift written only when non-zero.
std::string shifted(int i, double s) {
  const std::string var = "x" + std::to_string(i + 1);
  return s == 0.0 ? var : "(" + var + " - " + number(s) + ")";
}

std::string linear_form(const Eigen::RowVector3d& row, const Vec3& x_star) {
  std::string out;
  for (int i = 0; i < 3; ++i) {
    if (row[i] == 0.0) continue;
    if (!out.empty()) out += " + ";
    out += number(row[i]) + " * " + shifted(i, x_star[i]);
  }
  return out.empty() ? "0" : out;
}

}  // namespace

bool BoundaryData::observability_degenerate() const {
  const double scale = Phi.row(0).norm() * Phi.row(1).norm() * Phi.row(2).norm();
  return std::abs(det_Phi) <= kTangencyTol * scale;
}

BoundaryData boundary_data_linear(const Vec3& p, const Vec3& q, const Mat3& A,
                                  const Vec3& x_star) {
  if (p.norm() <= kTangencyTol)
    throw Error(ErrorKind::DegenerateGradient, "grad H vanishes at x*");
  const double pTq = p.dot(q);
  if (std::abs(pTq) <= kTangencyTol * p.norm() * q.norm())
    throw Error(ErrorKind::TangentRightField, "fR is tangent to the switching surface at x*");

  BoundaryData bd;
  bd.x_star = x_star;
  bd.p = p;
  bd.q = q;
  bd.A = A;
  bd.pTq = pTq;
  bd.B = (Mat3::Identity() - q * p.transpose() / pTq) * A;
  bd.Phi.row(0) = p.transpose();
  bd.Phi.row(1) = p.transpose() * A;
  bd.Phi.row(2) = p.transpose() * A * A;
  bd.det_Phi = bd.Phi.determinant();
  return bd;
}

BoundaryData boundary_data(const FilippovSystem& system, const Vec3& x_star) {
  const double h = system.H(x_star);
  const Vec3 fl = system.fL(x_star);
  if (fl.norm() > kEqTol || std::abs(h) > kEqTol) {
    throw Error(ErrorKind::NotAnEquilibrium,
                "x* is not a boundary equilibrium: |fL(x*)| = " + std::to_string(fl.norm()) +
                    ", |H(x*)| = " + std::to_string(std::abs(h)));
  }
  return boundary_data_linear(system.grad_H(x_star), system.fR(x_star),
                              jacobian_fd(system.fL, x_star), x_star);
}

VFields v_fields(const FilippovSystem& system, const Vec3& x) {
  const Vec3 g = system.grad_H(x);
  return {g.dot(system.fL(x)), g.dot(system.fR(x))};
}

const char* to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Crossing: return "crossing";
    case RegionKind::AttractingSliding: return "attracting sliding";
    case RegionKind::RepellingSliding: return "repelling sliding";
    case RegionKind::Tangency: return "tangency";
  }
  return "?";
}

const char* to_string(FoldKind k) {
  switch (k) {
    case FoldKind::VisibleFold: return "visible fold";
    case FoldKind::InvisibleFold: return "invisible fold";
    case FoldKind::DegenerateFold: return "degenerate fold";
  }
  return "?";
}

RegionKind classify_region(const FilippovSystem& system, const Vec3& x) {
  if (std::abs(system.H(x)) > kEqTol)
    throw Error(ErrorKind::NotOnSurface, "point is not on the switching surface");
  const Vec3 g = system.grad_H(x);
  const Vec3 fl = system.fL(x);
  const Vec3 fr = system.fR(x);
  const double vL = g.dot(fl);
  const double vR = g.dot(fr);
  if (std::abs(vL) <= kTangencyTol * g.norm() * fl.norm() ||
      std::abs(vR) <= kTangencyTol * g.norm() * fr.norm())
    return RegionKind::Tangency;
  if (vL * vR > 0) return RegionKind::Crossing;
  return vL > 0 ? RegionKind::AttractingSliding : RegionKind::RepellingSliding;
}

double w_L(const FilippovSystem& system, const Vec3& x) {
  const Vec3 fl = system.fL(x);
  if (fl.isZero(0.0)) return 0.0;
  auto vL = [&](const Vec3& y) { return system.grad_H(y).dot(system.fL(y)); };
  return central_gradient(vL, x, kNestedFdRelStep).dot(fl);
}

FoldKind classify_fold(const FilippovSystem& system, const Vec3& x) {
  if (std::abs(system.H(x)) > kEqTol || std::abs(v_fields(system, x).vL) > kEqTol)
    throw Error(ErrorKind::NotOnTangencyCurve, "point is not on the tangency curve");
  const Vec3 fl = system.fL(x);
  auto vL = [&](const Vec3& y) { return system.grad_H(y).dot(system.fL(y)); };
  const Vec3 grad_vL = central_gradient(vL, x, kNestedFdRelStep);
  const double w = grad_vL.dot(fl);
  const double tol = kTangencyTol * grad_vL.norm() * fl.norm();
  if (w < -tol) return FoldKind::VisibleFold;
  if (w > tol) return FoldKind::InvisibleFold;
  return FoldKind::DegenerateFold;
}

Vec3 sliding_vf(const FilippovSystem& system, const Vec3& x) {
  const Vec3 g = system.grad_H(x);
  const Vec3 fl = system.fL(x);
  const Vec3 fr = system.fR(x);
  const double vL = g.dot(fl);
  const double vR = g.dot(fr);
  if (std::abs(vL - vR) <= kTangencyTol * (std::abs(vL) + std::abs(vR) + 1.0))
    throw Error(ErrorKind::DegenerateSliding, "v_L and v_R coincide; no sliding direction");
  return (vL * fr - vR * fl) / (vL - vR);
}

FilippovSystem make_linear_system(const Mat3& A, const Vec3& q, const Vec3& p,
                                  const Vec3& x_star) {
  return FilippovSystem{
      parse_vector_field(linear_form(A.row(0), x_star), linear_form(A.row(1), x_star),
                         linear_form(A.row(2), x_star)),
      parse_vector_field(number(q[0]), number(q[1]), number(q[2])),
      parse_scalar_field(linear_form(p.transpose(), x_star))};
}

FilippovSystem make_normal_form_system(const NormalFormParams& nf) {
  Mat3 A;
  A << nf.tauL, 1, 0,
       -nf.sigmaL, 0, 1,
       nf.deltaL, 0, 0;
  return make_linear_system(A, Vec3(-1.0, nf.tauS, -nf.deltaS), Vec3(1.0, 0.0, 0.0));
}

}  // namespace bestab
