#pragma once

// Constructed Filippov systems with known boundary-equilibrium data.

#include <random>
#include <string>
#include <vector>

#include "bestab/expr.hpp"
#include "bestab/filippov.hpp"

namespace corpus {

using bestab::Mat3;
using bestab::Vec3;

struct Case {
  std::string name;
  bestab::FilippovSystem system;
  Vec3 x_star;
  // Exact derivatives at x_star.
  Mat3 A;
  Vec3 p;
  Vec3 q;

  Mat3 B() const { return (Mat3::Identity() - q * p.transpose() / p.dot(q)) * A; }
};

inline std::string num(double v) { return bestab::dsl::Expr::literal(v).to_string(); }

// fL = A u + k_L u1 u2 e_i pattern, fR = q + k_R u3^2, H = p.u + k_H u1^2,
// with u = x - x*. The quadratic terms vanish to first order at x*.
inline Case make_case(const std::string& name, const Mat3& A, const Vec3& p, const Vec3& q,
                      const Vec3& x_star, double kL, double kR, double kH) {
  std::string u[3];
  for (int i = 0; i < 3; ++i) u[i] = "(x" + std::to_string(i + 1) + " - " + num(x_star[i]) + ")";
  std::string fl[3], fr[3];
  for (int i = 0; i < 3; ++i) {
    fl[i] = num(A(i, 0)) + "*" + u[0] + " + " + num(A(i, 1)) + "*" + u[1] + " + " +
            num(A(i, 2)) + "*" + u[2];
    fr[i] = num(q[i]);
  }
  if (kL != 0) {
    fl[0] += " + " + num(kL) + "*" + u[0] + "*" + u[1];
    fl[2] += " + " + num(-kL) + "*" + u[2] + "^2";
  }
  if (kR != 0) {
    fr[1] += " + " + num(kR) + "*" + u[2] + "^2";
    fr[0] += " + " + num(kR) + "*" + u[0] + "*" + u[1];
  }
  std::string h = num(p[0]) + "*" + u[0] + " + " + num(p[1]) + "*" + u[1] + " + " + num(p[2]) +
                  "*" + u[2];
  if (kH != 0) h += " + " + num(kH) + "*" + u[0] + "^2";
  bestab::FilippovSystem sys{bestab::parse_vector_field(fl[0], fl[1], fl[2]),
                             bestab::parse_vector_field(fr[0], fr[1], fr[2]),
                             bestab::parse_scalar_field(h)};
  return {name, std::move(sys), x_star, A, p, q};
}

// Ten systems: four linear, six with quadratic terms.
inline std::vector<Case> jacobian_corpus() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<Case> out;
  for (int k = 0; k < 10; ++k) {
    Mat3 A;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A(i, j) = u(rng);
    Vec3 p(u(rng), u(rng), u(rng));
    Vec3 q(u(rng), u(rng), u(rng));
    if (p.dot(q) > -0.3 * p.norm() * q.norm())
      q -= (p.dot(q) + 0.8 * p.norm() * q.norm()) / p.squaredNorm() * p;
    const Vec3 xs = k % 2 ? Vec3(u(rng), u(rng), u(rng)) : Vec3::Zero();
    const bool quad = k >= 4;
    out.push_back(make_case("system " + std::to_string(k), A, p, q, xs, quad ? u(rng) : 0.0,
                            quad ? u(rng) : 0.0, quad ? u(rng) : 0.0));
  }
  return out;
}

}  // namespace corpus
