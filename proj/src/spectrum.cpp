#include "bestab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace bestab {
namespace {

double polish(const CharPoly& p, double x) {
  for (int it = 0; it < 3; ++it) {
    const double f = p(x);
    const double df = (3 * x - 2 * p.trace) * x + p.minors;
    if (df == 0.0) break;
    const double nx = x - f / df;
    if (!std::isfinite(nx) || std::abs(p(nx)) >= std::abs(f)) break;
    x = nx;
  }
  return x;
}

struct CubicSolution {
  EigTriple eig;
  bool near_degenerate;
};

CubicSolution solve_char_poly(const Mat3& m) {
  const CharPoly cp = char_poly(m);
  const double scale = std::max(m.norm(), std::numeric_limits<double>::min());

  // lambda = t + trace/3 gives t^3 + P t + Q = 0.
  const double shift = cp.trace / 3;
  const double a2 = -cp.trace, a1 = cp.minors, a0 = -cp.det;
  const double P = a1 - a2 * a2 / 3;
  const double Q = 2 * a2 * a2 * a2 / 27 - a2 * a1 / 3 + a0;
  const double disc = Q * Q / 4 + P * P * P / 27;
  const bool near = std::abs(disc) <= kDiscTol * std::pow(scale, 3);

  if (disc < 0) {
    const double r = 2 * std::sqrt(-P / 3);
    const double arg = std::clamp(3 * Q / (P * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3;
    std::array<double, 3> roots;
    for (int k = 0; k < 3; ++k)
      roots[k] = polish(cp, r * std::cos(phi - 2 * std::numbers::pi * k / 3) + shift);
    std::sort(roots.begin(), roots.end());
    return {ThreeReal{roots[0], roots[1], roots[2]}, near};
  }

  // One real root (Cardano), written to avoid cancellation between the cube roots.
  const double sq = std::sqrt(disc);
  const double u = std::cbrt(-Q / 2 - std::copysign(sq, Q));
  const double t = u == 0.0 ? 0.0 : u - P / (3 * u);
  const double r = polish(cp, t + shift);

  const double sum = cp.trace - r;
  const double prod = std::abs(r) >= 1e-3 * scale ? cp.det / r : cp.minors - r * sum;
  const double alpha = sum / 2;
  const double beta2 = prod - alpha * alpha;
  if (beta2 > 0) return {RealPlusPair{r, alpha, std::sqrt(beta2)}, near};

  // disc >= 0 but rounding left no imaginary part: a (near) repeated real root.
  const double s = std::sqrt(std::max(-beta2, 0.0));
  std::array<double, 3> roots{r, alpha - s, alpha + s};
  std::sort(roots.begin(), roots.end());
  return {ThreeReal{roots[0], roots[1], roots[2]}, true};
}

}  // namespace

CharPoly char_poly(const Mat3& m) {
  return {m.trace(), principal_minor_sum(m), m.determinant()};
}

EigTriple eig3_unchecked(const Mat3& m) { return solve_char_poly(m).eig; }

EigTriple eig3(const Mat3& m) {
  auto [eig, near] = solve_char_poly(m);
  if (near) throw NearDegenerateSpectrum(eig, "matrix has (nearly) repeated eigenvalues");
  return eig;
}

EigenPair nonzero_eigs_B(const Mat3& B, bool require_distinct) {
  const double scale = B.norm();
  if (std::abs(B.determinant()) > 1e-8 * std::pow(scale, 3))
    throw Error(ErrorKind::NoZeroEigenvalue, "matrix has no zero eigenvalue");

  EigenPair out;
  out.sum = B.trace();
  out.product = principal_minor_sum(B);
  const double disc = out.sum * out.sum - 4 * out.product;
  if (disc < 0) {
    const double im = std::sqrt(-disc) / 2;
    out.lam1 = {out.sum / 2, im};
    out.lam2 = {out.sum / 2, -im};
  } else {
    // Larger-magnitude root first, the other from the product.
    const double big = (out.sum + std::copysign(std::sqrt(disc), out.sum)) / 2;
    const double small = big == 0.0 ? 0.0 : out.product / big;
    out.lam1 = std::min(big, small);
    out.lam2 = std::max(big, small);
  }
  if (require_distinct && std::abs(out.lam1 - out.lam2) <= kEigGapTol * scale)
    throw Error(ErrorKind::NearDegenerate, "non-zero eigenvalues of B coincide");
  return out;
}

HybridParams pwl_params(double alpha, double beta, double gamma, double lamS_sum,
                        double lamS_prod) {
  if (!(beta > 0) || !(gamma > 0))
    throw Error(ErrorKind::ConstraintViolation, "pwl_params needs beta > 0 and gamma > 0");
  HybridParams p{2 * alpha / gamma, (alpha * alpha + beta * beta) / (gamma * gamma),
                 lamS_sum / gamma, lamS_prod / (gamma * gamma)};
  p.validate();
  return p;
}

NormalFormParams scaled_normal_form(double alpha, double beta, double gamma,
                                    double lamS_sum, double lamS_prod, double time_scale) {
  if (!(beta > 0) || !(gamma > 0) || !(time_scale > 0))
    throw Error(ErrorKind::ConstraintViolation,
                "normal form needs beta > 0, gamma > 0 and a positive time scale");
  // A/k has eigenvalues (alpha +- i beta)/k and -gamma/k.
  const double k = time_scale;
  const double re = alpha / k, mod2 = (alpha * alpha + beta * beta) / (k * k), g = gamma / k;
  NormalFormParams nf;
  nf.tauL = 2 * re - g;
  nf.sigmaL = mod2 - 2 * re * g;
  nf.deltaL = -g * mod2;
  nf.tauS = lamS_sum / k;
  nf.deltaS = lamS_prod / (k * k);
  return nf;
}

NormalFormParams normal_form_params(double alpha, double beta, double gamma,
                                    double lamS_sum, double lamS_prod) {
  HybridParams p = pwl_params(alpha, beta, gamma, lamS_sum, lamS_prod);
  (void)p;
  return scaled_normal_form(alpha, beta, gamma, lamS_sum, lamS_prod, gamma);
}

// Theorem ---------------------------------------------------------------------

StabilityVerdict theorem_classify(const BoundaryData& bd) {
  if (bd.pTq > 0) return UnstableRightward{bd.pTq};
  if (bd.observability_degenerate())
    return Degenerate{"PBH fails: det(Phi) = 0, an eigenvector of A is orthogonal to p"};

  bool a_repeated = false;
  EigTriple eigA;
  try {
    eigA = eig3(bd.A);
  } catch (const NearDegenerateSpectrum& e) {
    eigA = e.estimate();
    a_repeated = true;
  }

  EigenPair eigB;
  try {
    eigB = nonzero_eigs_B(bd.B);
  } catch (const Error& e) {
    return Degenerate{std::string("B: ") + e.what()};
  }

  const double tolA = kEigGapTol * bd.A.norm();
  const double tolB = kEigGapTol * bd.B.norm();

  // Case (i): a positive real eigenvalue of A or of B.
  double top_real_A;
  if (const auto* tr = std::get_if<ThreeReal>(&eigA))
    top_real_A = tr->l3;
  else
    top_real_A = std::get<RealPlusPair>(eigA).real_eig;
  if (top_real_A > tolA) return UnstableEigenvalue{WhichMatrix::A, top_real_A};
  if (eigB.is_real() && eigB.lam2.real() > tolB)
    return UnstableEigenvalue{WhichMatrix::B, eigB.lam2.real()};

  if (std::abs(top_real_A) <= tolA) return Degenerate{"A has a zero eigenvalue"};
  if (eigB.is_real() && std::abs(eigB.lam2.real()) <= tolB)
    return Degenerate{"B has a repeated zero eigenvalue"};
  if (a_repeated) return Degenerate{"A has repeated eigenvalues"};

  // Past case (i), a real B pair is necessarily both negative.
  const bool b_ok = !eigB.is_real() || eigB.lam2.real() < -tolB;
  if (!b_ok) return Degenerate{"non-zero eigenvalues of B are not complex or both negative"};

  if (const auto* tr = std::get_if<ThreeReal>(&eigA)) {
    if (tr->l2 - tr->l1 <= tolA || tr->l3 - tr->l2 <= tolA)
      return Degenerate{"A has repeated eigenvalues"};
    return StableCaseII{};
  }

  const auto& rp = std::get<RealPlusPair>(eigA);
  const double gamma = -rp.real_eig;
  try {
    return CaseIII{pwl_params(rp.alpha, rp.beta, gamma, eigB.sum, eigB.product), rp.alpha,
                   rp.beta, gamma, eigB};
  } catch (const Error& e) {
    return Degenerate{e.what()};
  }
}

std::string describe(const StabilityVerdict& v) {
  std::ostringstream os;
  os.precision(12);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, UnstableRightward>) {
          os << "unstable: fR points away from the switching surface (p^T q = " << x.pTq << ")";
        } else if constexpr (std::is_same_v<T, UnstableEigenvalue>) {
          os << "unstable: " << (x.matrix == WhichMatrix::A ? "A" : "B")
             << " has the positive eigenvalue " << x.eigenvalue;
        } else if constexpr (std::is_same_v<T, StableCaseII>) {
          os << "asymptotically stable: A has three distinct negative eigenvalues";
        } else if constexpr (std::is_same_v<T, CaseIII>) {
          os << "rotational case: (a, b, c, d) = (" << x.params.a << ", " << x.params.b << ", "
             << x.params.c << ", " << x.params.d << ")";
        } else {
          os << "degenerate: " << x.reason;
        }
      },
      v);
  return os.str();
}

// Three negative eigenvalues ---------------------------------------------------

namespace {

void check_order(const OrderedNegativeTriple& l) {
  if (!(l.l1 < l.l2 && l.l2 < l.l3 && l.l3 < 0))
    throw Error(ErrorKind::EigenvalueOrderViolation, "need l1 < l2 < l3 < 0");
}

// (e^z - 1)/z and its derivative, accurate near z = 0.
double phi1(double z) { return std::abs(z) < 1e-8 ? 1 + z / 2 : std::expm1(z) / z; }

double phi1_prime(double z) {
  if (std::abs(z) < 1e-3) return 0.5 + z / 3 + z * z / 8 + z * z * z / 30;
  return (std::exp(z) * (z - 1) + 1) / (z * z);
}

}  // namespace

Mat3 companion_from_eigs(const OrderedNegativeTriple& l) {
  const double tau = l.l1 + l.l2 + l.l3;
  const double sigma = l.l1 * l.l2 + l.l1 * l.l3 + l.l2 * l.l3;
  const double delta = l.l1 * l.l2 * l.l3;
  Mat3 C;
  C << tau, 1, 0,
       -sigma, 0, 1,
       delta, 0, 0;
  return C;
}

std::array<Vec3, 3> triple_eigenvectors(const OrderedNegativeTriple& l) {
  check_order(l);
  return {Vec3(1, -(l.l2 + l.l3), l.l2 * l.l3), Vec3(1, -(l.l3 + l.l1), l.l3 * l.l1),
          Vec3(1, -(l.l1 + l.l2), l.l1 * l.l2)};
}

double triple_D(const OrderedNegativeTriple& l) {
  return (l.l1 - l.l2) * (l.l2 - l.l3) * (l.l3 - l.l1);
}

std::array<double, 3> triple_coefficients(const OrderedNegativeTriple& l) {
  check_order(l);
  const double D = triple_D(l);
  return {(l.l2 - l.l3) / D, (l.l3 - l.l1) / D, (l.l1 - l.l2) / D};
}

Vec3 appendixB_orbit(const OrderedNegativeTriple& l, double t) {
  check_order(l);
  // The three terms cancel heavily when eigenvalues are close (relative
  // term size up to ~1e8 over the sampled range), so the sum is formed in
  // quad precision. The exponentials themselves only need long double.
  using R = __float128;
  const R l1 = l.l1, l2 = l.l2, l3 = l.l3;
  auto e = [t](double lam) {
    return static_cast<R>(std::exp(static_cast<long double>(lam) * t));
  };
  const R D = (l1 - l2) * (l2 - l3) * (l3 - l1);
  const R w1 = (l2 - l3) / D * e(l.l1);
  const R w2 = (l3 - l1) / D * e(l.l2);
  const R w3 = (l1 - l2) / D * e(l.l3);
  return Vec3(static_cast<double>(w1 + w2 + w3),
              static_cast<double>(-(w1 * (l2 + l3) + w2 * (l3 + l1) + w3 * (l1 + l2))),
              static_cast<double>(w1 * l2 * l3 + w2 * l3 * l1 + w3 * l1 * l2));
}

double appendixB_F(const OrderedNegativeTriple& l, double t) {
  check_order(l);
  return (l.l2 - l.l3) * std::exp(l.l1 * t) + (l.l3 - l.l1) * std::exp(l.l2 * t) +
         (l.l1 - l.l2) * std::exp(l.l3 * t);
}

double triple_first_component_scaled(const OrderedNegativeTriple& l, double t) {
  check_order(l);
  if (t == 0.0) return 0.0;
  // phi_1(t) = -g[l1, l2, l3] for g(x) = e^{x t}. With m_i = l_i - l3 and
  // g[m, 0] = t phi1(m t), the second divided difference is
  // e^{l3 t} t (phi1(m1 t) - phi1(m2 t)) / (m1 - m2).
  const double z1 = (l.l1 - l.l3) * t;
  const double z2 = (l.l2 - l.l3) * t;
  double dd;
  if (std::abs(z1 - z2) < 1e-6 * std::max(1.0, std::abs(z2)))
    dd = t * t * phi1_prime((z1 + z2) / 2);
  else
    dd = t * t * (phi1(z1) - phi1(z2)) / (z1 - z2);
  return -dd;
}

TripleSuiteReport run_triple_suite(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_mag(-2.0, 2.0);

  std::array<double, 100> grid;
  for (int i = 0; i < 100; ++i) grid[i] = std::pow(10.0, -4.0 + 6.0 * (i + 1) / 100.0);

  TripleSuiteReport report;
  while (report.trials < trials) {
    std::array<double, 3> m{std::pow(10.0, log_mag(rng)), std::pow(10.0, log_mag(rng)),
                            std::pow(10.0, log_mag(rng))};
    std::sort(m.begin(), m.end());
    if (m[0] == m[1] || m[1] == m[2]) continue;
    const OrderedNegativeTriple l{-m[2], -m[1], -m[0]};
    ++report.trials;

    const Mat3 C = companion_from_eigs(l);
    const auto v = triple_eigenvectors(l);
    const std::array<double, 3> lam{l.l1, l.l2, l.l3};
    bool eig_ok = true;
    for (int i = 0; i < 3; ++i) {
      const double scale = C.norm() * v[i].norm();
      const double res = (C * v[i] - lam[i] * v[i]).norm() / scale;
      report.worst_eigen_residual = std::max(report.worst_eigen_residual, res);
      if (!(res <= 1e-8)) eig_ok = false;
    }
    if (!eig_ok) ++report.eigenvector_failures;

    if (!((appendixB_orbit(l, 0.0) - Vec3(0, 0, -1)).norm() <= 1e-12))
      ++report.initial_condition_failures;

    for (double t : grid) {
      if (!(triple_first_component_scaled(l, t) < 0)) {
        ++report.sign_failures;
        break;
      }
    }
  }
  return report;
}

}  // namespace bestab
