#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "bestab/expr.hpp"
#include "bestab/linalg.hpp"

namespace bestab {

/// Relative central-difference step, about the cube root of double epsilon.
inline constexpr double kFdRelStep = 6e-6;

struct ScalarFieldSpec {
  dsl::Expr expr;

  double operator()(const Vec3& x) const { return expr.eval(x); }
};

struct VectorFieldSpec {
  std::array<dsl::Expr, 3> components;

  Vec3 operator()(const Vec3& x) const {
    return {components[0].eval(x), components[1].eval(x), components[2].eval(x)};
  }
};

ScalarFieldSpec parse_scalar_field(std::string_view text);
VectorFieldSpec parse_vector_field(std::string_view f1, std::string_view f2,
                                   std::string_view f3);

/// Central differences with per-component step h_i = h_rel * max(1, |x_i|).
/// f is any callable Vec3 -> double; evaluation errors propagate.
template <typename F>
Vec3 central_gradient(const F& f, const Vec3& x, double h_rel = kFdRelStep) {
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    const double h = h_rel * std::max(1.0, std::abs(x[i]));
    Vec3 xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (xp[i] - xm[i]);
  }
  return g;
}

/// Jacobian of a callable Vec3 -> Vec3, column by column.
template <typename F>
Mat3 central_jacobian(const F& f, const Vec3& x, double h_rel = kFdRelStep) {
  Mat3 J;
  for (int i = 0; i < 3; ++i) {
    const double h = h_rel * std::max(1.0, std::abs(x[i]));
    Vec3 xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    J.col(i) = (f(xp) - f(xm)) / (xp[i] - xm[i]);
  }
  return J;
}

inline Vec3 gradient_fd(const ScalarFieldSpec& field, const Vec3& point) {
  return central_gradient(field, point);
}

inline Mat3 jacobian_fd(const VectorFieldSpec& field, const Vec3& point) {
  return central_jacobian(field, point);
}

}  // namespace bestab
