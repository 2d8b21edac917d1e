#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <variant>

#include "bestab/errors.hpp"
#include "bestab/filippov.hpp"
#include "bestab/linalg.hpp"
#include "bestab/params.hpp"

namespace bestab {

/// Relative tolerance on the depressed-cubic discriminant, against ||M||^3.
inline constexpr double kDiscTol = 1e-10;
/// Relative gap (against ||M||) below which eigenvalues count as equal or zero.
inline constexpr double kEigGapTol = 1e-8;

struct ThreeReal {
  double l1, l2, l3;  // ascending
};

/// Eigenvalues {real_eig, alpha + i beta, alpha - i beta} with beta > 0.
struct RealPlusPair {
  double real_eig;
  double alpha;
  double beta;
};

using EigTriple = std::variant<ThreeReal, RealPlusPair>;

/// Coefficients of det(lambda I - M) = lambda^3 - trace lambda^2 + minors lambda - det.
struct CharPoly {
  double trace;
  double minors;
  double det;

  double operator()(double lambda) const {
    return ((lambda - trace) * lambda + minors) * lambda - det;
  }
};

CharPoly char_poly(const Mat3& m);

/// Thrown by eig3 for (nearly) repeated roots. estimate() is the closed-form
/// answer anyway, for callers that can use it.
class NearDegenerateSpectrum : public Error {
 public:
  NearDegenerateSpectrum(const EigTriple& estimate, const std::string& what)
      : Error(ErrorKind::NearDegenerate, what), estimate_(estimate) {}
  const EigTriple& estimate() const noexcept { return estimate_; }

 private:
  EigTriple estimate_;
};

/// Closed-form eigenvalues of a real 3x3 matrix via the depressed cubic.
EigTriple eig3(const Mat3& m);

/// Same computation without the near-degeneracy check.
EigTriple eig3_unchecked(const Mat3& m);

/// The two eigenvalues of B left after deflating its zero eigenvalue.
struct EigenPair {
  std::complex<double> lam1;
  std::complex<double> lam2;
  double sum;
  double product;

  bool is_real() const { return lam1.imag() == 0.0; }
};

/// Throws NoZeroEigenvalue when det(B) is not zero to 1e-8 relative. With
/// require_distinct, a (nearly) repeated pair throws NearDegenerate.
EigenPair nonzero_eigs_B(const Mat3& B, bool require_distinct = false);

// Theorem verdicts ----------------------------------------------------------

enum class WhichMatrix { A, B };

struct UnstableRightward {
  double pTq;
};
struct UnstableEigenvalue {
  WhichMatrix matrix;
  double eigenvalue;
};
struct StableCaseII {};
struct CaseIII {
  HybridParams params;
  double alpha, beta, gamma;
  EigenPair sliding;
};
struct Degenerate {
  std::string reason;
};

using StabilityVerdict =
    std::variant<UnstableRightward, UnstableEigenvalue, StableCaseII, CaseIII, Degenerate>;

StabilityVerdict theorem_classify(const BoundaryData& bd);

std::string describe(const StabilityVerdict& v);

// Parameter maps -------------------------------------------------------------

/// a = 2 alpha/gamma, b = (alpha^2 + beta^2)/gamma^2, c = sum/gamma,
/// d = prod/gamma^2. Throws ConstraintViolation if the result is not valid.
HybridParams pwl_params(double alpha, double beta, double gamma, double lamS_sum,
                        double lamS_prod);

/// Characteristic-polynomial coefficients of A/time_scale and B/time_scale,
/// where A has eigenvalues alpha +- i beta, -gamma and B has non-zero
/// eigenvalues with the given sum and product.
NormalFormParams scaled_normal_form(double alpha, double beta, double gamma,
                                    double lamS_sum, double lamS_prod, double time_scale);

/// The reduction's choice time_scale = gamma, which puts an eigenvalue -1 on
/// the left piece.
NormalFormParams normal_form_params(double alpha, double beta, double gamma,
                                    double lamS_sum, double lamS_prod);

// Three distinct negative eigenvalues ---------------------------------------

/// Eigenvalues l1 < l2 < l3 < 0 of the companion matrix
/// [[tau, 1, 0], [-sigma, 0, 1], [delta, 0, 0]].
struct OrderedNegativeTriple {
  double l1, l2, l3;
};

Mat3 companion_from_eigs(const OrderedNegativeTriple& lams);
std::array<Vec3, 3> triple_eigenvectors(const OrderedNegativeTriple& lams);
std::array<double, 3> triple_coefficients(const OrderedNegativeTriple& lams);
double triple_D(const OrderedNegativeTriple& lams);

/// Orbit of (0, 0, -1) under y' = C y as the explicit eigen-expansion.
Vec3 appendixB_orbit(const OrderedNegativeTriple& lams, double t);

/// (l2 - l3) e^{l1 t} + (l3 - l1) e^{l2 t} + (l1 - l2) e^{l3 t}, so that the
/// first orbit component is F(t)/D. F is negative for t > 0.
double appendixB_F(const OrderedNegativeTriple& lams, double t);

/// e^{-l3 t} times the first orbit component, evaluated as minus a second
/// divided difference of exp(lambda t). Free of underflow and of the
/// cancellation in the three-term sum; same sign as the component itself.
double triple_first_component_scaled(const OrderedNegativeTriple& lams, double t);

struct TripleSuiteReport {
  int trials = 0;
  int eigenvector_failures = 0;
  int initial_condition_failures = 0;
  int sign_failures = 0;
  double worst_eigen_residual = 0.0;  // relative to scale

  bool passed() const {
    return eigenvector_failures == 0 && initial_condition_failures == 0 && sign_failures == 0;
  }
};

/// Random triples with log-uniform magnitudes in [1e-2, 1e2]; residuals checked
/// to 1e-8 * scale, phi(0) to 1e-12, sign on a 100-point log grid in (1e-4, 1e2].
TripleSuiteReport run_triple_suite(int trials, std::uint64_t seed);

}  // namespace bestab
