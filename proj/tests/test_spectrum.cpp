#include <doctest.h>

#include <cmath>
#include <random>

#include "bestab/errors.hpp"
#include "bestab/filippov.hpp"
#include "bestab/spectrum.hpp"
#include "oracles.hpp"

using namespace bestab;

namespace {

Mat3 random_matrix(std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat3 M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = u(rng);
  return M;
}

// Similarity transform of the linear system (A, q, p): x = T y.
BoundaryData transformed(const BoundaryData& bd, const Mat3& T) {
  const Mat3 Ti = T.inverse();
  return boundary_data_linear(T.transpose() * bd.p, Ti * bd.q, Ti * bd.A * T);
}

}  // namespace

TEST_CASE("eig3: examples") {
  const auto d = eig3(Vec3(-1, -2, -3).asDiagonal().toDenseMatrix());
  REQUIRE(std::holds_alternative<ThreeReal>(d));
  const auto& tr = std::get<ThreeReal>(d);
  CHECK(tr.l1 == doctest::Approx(-3).epsilon(1e-12));
  CHECK(tr.l2 == doctest::Approx(-2).epsilon(1e-12));
  CHECK(tr.l3 == doctest::Approx(-1).epsilon(1e-12));

  const auto c = eig3(oracle::left_matrix(HybridParams{0.2, 5, 0, 1}));
  REQUIRE(std::holds_alternative<RealPlusPair>(c));
  const auto& rp = std::get<RealPlusPair>(c);
  CHECK(rp.real_eig == doctest::Approx(-1).epsilon(1e-12));
  CHECK(rp.alpha == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(rp.beta == doctest::Approx(std::sqrt(5 - 0.01)).epsilon(1e-12));
  // Back-substitution into the quadratic factor.
  const std::complex<double> z(rp.alpha, rp.beta);
  CHECK(std::abs(z * z - 0.2 * z + 5.0) <= 1e-12);

  Mat3 rot;
  rot << 0, -1, 0, 1, 0, 0, 0, 0, -1;
  const auto r = std::get<RealPlusPair>(eig3(rot));
  CHECK(r.real_eig == doctest::Approx(-1).epsilon(1e-12));
  CHECK(std::abs(r.alpha) <= 1e-12);
  CHECK(r.beta == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("eig3: repeated roots are NearDegenerate") {
  CHECK_THROWS_AS(eig3(Vec3(-1, -1, -2).asDiagonal().toDenseMatrix()), NearDegenerateSpectrum);
  CHECK_THROWS_AS(eig3(Mat3::Identity()), NearDegenerateSpectrum);
  try {
    eig3(Vec3(-1, -1, -2).asDiagonal().toDenseMatrix());
  } catch (const NearDegenerateSpectrum& e) {
    CHECK(e.kind() == ErrorKind::NearDegenerate);
    const auto& est = std::get<ThreeReal>(e.estimate());
    CHECK(est.l1 == doctest::Approx(-2));
  }
}

TEST_CASE("eig3: characteristic polynomial residuals on random matrices") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int k = 0; k < 2000; ++k) {
    const Mat3 M = random_matrix(rng, k % 3 == 0 ? 50.0 : 2.0);
    const CharPoly cp = char_poly(M);
    const double n = M.norm();
    const double tol = 1e-8 * (1 + n * n * n);
    EigTriple e;
    try {
      e = eig3(M);
    } catch (const NearDegenerateSpectrum&) {
      continue;
    }
    ++checked;
    if (const auto* t = std::get_if<ThreeReal>(&e)) {
      CHECK(t->l1 <= t->l2);
      CHECK(t->l2 <= t->l3);
      CHECK(std::abs(cp(t->l1)) <= tol);
      CHECK(std::abs(cp(t->l2)) <= tol);
      CHECK(std::abs(cp(t->l3)) <= tol);
    } else {
      const auto& r = std::get<RealPlusPair>(e);
      CHECK(r.beta > 0);
      CHECK(std::abs(cp(r.real_eig)) <= tol);
      const std::complex<double> z(r.alpha, r.beta);
      const std::complex<double> pz = ((z - cp.trace) * z + cp.minors) * z - cp.det;
      CHECK(std::abs(pz) <= tol);
      // Compare with a general eigensolver.
      const Eigen::EigenSolver<Mat3> es(M);
      double best = 1e300;
      for (int i = 0; i < 3; ++i) best = std::min(best, std::abs(es.eigenvalues()[i] - z));
      CHECK(best <= 1e-8 * (1 + n));
    }
  }
  CHECK(checked > 1900);
}

TEST_CASE("nonzero_eigs_B: examples") {
  const EigenPair d = nonzero_eigs_B(Vec3(0, -1, -2).asDiagonal().toDenseMatrix());
  CHECK(d.is_real());
  CHECK(std::min(d.lam1.real(), d.lam2.real()) == doctest::Approx(-2));
  CHECK(std::max(d.lam1.real(), d.lam2.real()) == doctest::Approx(-1));

  for (auto [c, dd] : {std::pair{0.2, 1.0}, {-3.0, 2.0}, {1.0, 5.0}}) {
    Mat3 B;
    B << 0, 0, 0, 0, c, 1, 0, -dd, 0;
    const EigenPair e = nonzero_eigs_B(B);
    CHECK(e.sum == doctest::Approx(c));
    CHECK(e.product == doctest::Approx(dd));
    for (auto z : {e.lam1, e.lam2}) CHECK(std::abs(z * z - c * z + dd) <= 1e-12);
  }

  const Mat3 rep = Vec3(0, -1, -1).asDiagonal();
  CHECK_NOTHROW(nonzero_eigs_B(rep));
  CHECK_THROWS_AS(nonzero_eigs_B(rep, true), Error);
  try {
    nonzero_eigs_B(rep, true);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NearDegenerate);
  }
  try {
    nonzero_eigs_B(Mat3::Identity());
    FAIL("expected NoZeroEigenvalue");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoZeroEigenvalue);
  }
}

TEST_CASE("theorem_classify: case (i)") {
  const Mat3 A = Vec3(1, -1, -2).asDiagonal();
  const BoundaryData bd = boundary_data_linear(Vec3(1, 1, 1).normalized(), Vec3(-1, 0, 0), A);
  const StabilityVerdict v = theorem_classify(bd);
  REQUIRE(std::holds_alternative<UnstableEigenvalue>(v));
  CHECK(std::get<UnstableEigenvalue>(v).matrix == WhichMatrix::A);
  CHECK(std::get<UnstableEigenvalue>(v).eigenvalue == doctest::Approx(1));
}

TEST_CASE("theorem_classify: case (i) through B") {
  // A stable with three real eigenvalues, B with a positive eigenvalue.
  const NormalFormParams nf{-6, 11, -6, 1, -2};
  const BoundaryData bd = boundary_data(make_normal_form_system(nf), Vec3::Zero());
  const StabilityVerdict v = theorem_classify(bd);
  REQUIRE(std::holds_alternative<UnstableEigenvalue>(v));
  CHECK(std::get<UnstableEigenvalue>(v).matrix == WhichMatrix::B);
  CHECK(std::get<UnstableEigenvalue>(v).eigenvalue > 0);
}

TEST_CASE("theorem_classify: case (ii)") {
  // Companion of (l+1)(l+2)(l+3); sliding pair roots of l^2 + 3l + 2.
  const NormalFormParams nf{-6, 11, -6, -3, 2};
  const BoundaryData bd = boundary_data(make_normal_form_system(nf), Vec3::Zero());
  const EigenPair e = nonzero_eigs_B(bd.B);
  CHECK(e.sum == doctest::Approx(-3));
  CHECK(e.product == doctest::Approx(2));
  CHECK(std::holds_alternative<StableCaseII>(theorem_classify(bd)));

  std::mt19937_64 rng(4);
  for (int k = 0; k < 10; ++k) {
    Mat3 T = random_matrix(rng);
    if (std::abs(T.determinant()) < 0.2) continue;
    CHECK(std::holds_alternative<StableCaseII>(theorem_classify(transformed(bd, T))));
  }
}

TEST_CASE("theorem_classify: case (iii) recovers (0.2, 5, 0.2, 1)") {
  const BoundaryData bd =
      boundary_data(make_normal_form_system(to_normal_form({0.2, 5, 0.2, 1})), Vec3::Zero());
  const StabilityVerdict v = theorem_classify(bd);
  REQUIRE(std::holds_alternative<CaseIII>(v));
  const auto& c = std::get<CaseIII>(v);
  CHECK(c.gamma == doctest::Approx(1).epsilon(1e-12));
  CHECK(c.alpha == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(c.beta == doctest::Approx(std::sqrt(5 - 0.01)).epsilon(1e-12));
  CHECK(c.params.a == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(c.params.b == doctest::Approx(5).epsilon(1e-10));
  CHECK(c.params.c == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(c.params.d == doctest::Approx(1).epsilon(1e-10));
}

TEST_CASE("theorem_classify: time scaling and similarity keep the CaseIII parameters") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> us(0.1, 10);
  for (int k = 0; k < 20; ++k) {
    const HybridParams p = oracle::random_params(rng);
    const BoundaryData base = boundary_data_linear(
        Vec3(1, 0, 0), Vec3(-1, p.c, -p.d), oracle::left_matrix(p));
    const auto v0 = theorem_classify(base);
    REQUIRE(std::holds_alternative<CaseIII>(v0));
    const double s = us(rng);
    Mat3 T = random_matrix(rng);
    if (std::abs(T.determinant()) < 0.2) T = Mat3::Identity();
    const BoundaryData scaled = boundary_data_linear(base.p, s * base.q, s * base.A);
    for (const BoundaryData& bd : {scaled, transformed(scaled, T)}) {
      const auto v = theorem_classify(bd);
      REQUIRE(std::holds_alternative<CaseIII>(v));
      const HybridParams q = std::get<CaseIII>(v).params;
      CHECK(oracle::rel_err(q.a, p.a) <= 1e-8 * std::max(1.0, 1 / std::abs(p.a)));
      CHECK(oracle::rel_err(q.b, p.b) <= 1e-8);
      CHECK(std::abs(q.c - p.c) <= 1e-8 * std::max(1.0, std::abs(p.c)));
      CHECK(oracle::rel_err(q.d, p.d) <= 1e-8);
    }
  }
}

TEST_CASE("theorem_classify: degenerate patterns") {
  // With p = e1 the non-zero eigenvalues of B come from [[q2, 1], [q3, 0]]: here -1 and -2.
  const Vec3 p(1, 0, 0), q(-1, -3, -2);
  // Repeated eigenvalue in A: (l+1)^2 (l+2).
  const StabilityVerdict rep = theorem_classify(boundary_data_linear(p, q, oracle::left_matrix(-4, 5, -2)));
  REQUIRE(std::holds_alternative<Degenerate>(rep));
  CHECK(std::get<Degenerate>(rep).reason.find("repeated") != std::string::npos);
  // Zero real eigenvalue next to a stable complex pair: l (l^2 + 0.4 l + 5).
  const StabilityVerdict zero = theorem_classify(boundary_data_linear(p, q, oracle::left_matrix(-0.4, 5, 0)));
  REQUIRE(std::holds_alternative<Degenerate>(zero));
  CHECK(std::get<Degenerate>(zero).reason.find("zero") != std::string::npos);
}

TEST_CASE("pwl_params: examples") {
  const HybridParams a = pwl_params(0.1, std::sqrt(4.99), 1, 0.2, 1);
  CHECK(a.a == doctest::Approx(0.2));
  CHECK(a.b == doctest::Approx(5));
  CHECK(a.c == doctest::Approx(0.2));
  CHECK(a.d == doctest::Approx(1));
  const HybridParams b = pwl_params(0.2, 2 * std::sqrt(4.99), 2, 0.4, 4);
  CHECK(b.a == doctest::Approx(a.a));
  CHECK(b.b == doctest::Approx(a.b));
  CHECK(b.c == doctest::Approx(a.c));
  CHECK(b.d == doctest::Approx(a.d));
  const HybridParams f2 = pwl_params(-0.1, std::sqrt(4.99), 1, -0.2, 3);
  CHECK(f2.a == doctest::Approx(-0.2));
  CHECK(f2.b == doctest::Approx(5));
  CHECK(f2.c == doctest::Approx(-0.2));
  CHECK(f2.d == doctest::Approx(3));
  CHECK_THROWS_AS(pwl_params(0.1, 1, 1, 2, 0.5), Error);  // c > 0, d < c^2/4
}

TEST_CASE("normal_form_params: examples") {
  const NormalFormParams n = normal_form_params(0, 1, 1, -1, 1);
  CHECK(n.tauL == doctest::Approx(-1));
  CHECK(n.sigmaL == doctest::Approx(1));
  CHECK(n.deltaL == doctest::Approx(-1));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ua(-1, 1), ub(0.3, 3), ug(0.2, 4);
  for (int k = 0; k < 20; ++k) {
    const double al = ua(rng), be = ub(rng), ga = ug(rng), sum = -ub(rng), prod = ub(rng);
    const HybridParams p = pwl_params(al, be, ga, sum, prod);
    const NormalFormParams nf = normal_form_params(al, be, ga, sum, prod);
    CHECK(nf.tauL == doctest::Approx(p.a - 1));
    CHECK(nf.sigmaL == doctest::Approx(p.b - p.a));
    CHECK(nf.deltaL == doctest::Approx(-p.b));
    CHECK(nf.tauS == doctest::Approx(p.c));
    CHECK(nf.deltaS == doctest::Approx(p.d));
    const auto e = std::get<RealPlusPair>(eig3(oracle::left_matrix(nf.tauL, nf.sigmaL, nf.deltaL)));
    CHECK(e.real_eig == doctest::Approx(-1));
    CHECK(e.alpha == doctest::Approx(al / ga));
    CHECK(e.beta == doctest::Approx(be / ga));
  }
}

TEST_CASE("negative triple: eigenvectors, coefficients, initial condition") {
  const OrderedNegativeTriple l{-3, -2, -1};
  const Mat3 C = companion_from_eigs(l);
  const auto v = triple_eigenvectors(l);
  const double lam[3] = {-3, -2, -1};
  for (int i = 0; i < 3; ++i) CHECK((C * v[i] - lam[i] * v[i]).norm() <= 1e-10);
  CHECK((appendixB_orbit(l, 0) - Vec3(0, 0, -1)).norm() <= 1e-12);
  CHECK(triple_D(l) > 0);
  CHECK(appendixB_F(l, 0) == 0.0);
  CHECK_THROWS_AS(appendixB_orbit({-1, -2, -3}, 1), Error);
  CHECK_THROWS_AS(appendixB_F({-2, -1, 0.5}, 1), Error);
}

TEST_CASE("negative triple: the orbit solves the linear ODE") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 30; ++k) {
    std::array<double, 3> m{std::pow(10, u(rng) / 2), std::pow(10, u(rng) / 2),
                            std::pow(10, u(rng) / 2)};
    std::sort(m.begin(), m.end());
    const OrderedNegativeTriple l{-m[2], -m[1], -m[0]};
    const Mat3 C = companion_from_eigs(l);
    for (double t : {0.1, 0.5, 1.0, 3.0}) {
      const Vec3 exact = oracle::expm_apply(C, Vec3(0, 0, -1), t);
      CHECK(oracle::rel_err(appendixB_orbit(l, t), exact) <= 1e-8);
      const double h = 1e-5;
      const Vec3 deriv = (appendixB_orbit(l, t + h) - appendixB_orbit(l, t - h)) / (2 * h);
      CHECK((deriv - C * appendixB_orbit(l, t)).norm() <=
            1e-6 * std::max(1e-3, (C * appendixB_orbit(l, t)).norm()));
    }
  }
}

TEST_CASE("negative triple: F is D times the first component and negative for t > 0") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 1000; ++k) {
    std::array<double, 3> m{std::pow(10, u(rng)), std::pow(10, u(rng)), std::pow(10, u(rng))};
    std::sort(m.begin(), m.end());
    if (m[0] == m[1] || m[1] == m[2]) continue;
    const OrderedNegativeTriple l{-m[2], -m[1], -m[0]};
    const double D = triple_D(l);
    CHECK(D > 0);
    for (double t : {1e-3, 0.1, 1.0, 10.0}) {
      const double F = appendixB_F(l, t);
      const double phi1 = appendixB_orbit(l, t)[0];
      // F itself is a three-term sum with rounding error of order eps times
      // its largest term.
      const double noise = 1e-14 * (l.l3 - l.l1) * std::exp(l.l3 * t);
      CHECK(std::abs(F - D * phi1) <= 1e-9 * std::abs(F) + noise);
      // The scaled form carries the sign without underflow.
      CHECK(triple_first_component_scaled(l, t) < 0);
      if (std::abs(F) > noise) CHECK(F < 0);
    }
  }
}

TEST_CASE("negative triple: scaled first component agrees with the direct sum where that is accurate") {
  const OrderedNegativeTriple l{-3, -2, -1};
  for (double t : {0.01, 0.3, 1.0, 5.0}) {
    const double direct = appendixB_orbit(l, t)[0];
    const double scaled = triple_first_component_scaled(l, t) * std::exp(l.l3 * t);
    CHECK(oracle::rel_err(direct, scaled) <= 1e-9);
  }
}

TEST_CASE("negative triple: property suite") {
  const TripleSuiteReport r = run_triple_suite(1000, 99);
  CHECK(r.trials == 1000);
  CHECK(r.passed());
}
