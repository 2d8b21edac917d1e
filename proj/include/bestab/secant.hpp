#pragma once

#include <cmath>
#include <limits>

namespace bestab {

struct SecantResult {
  double x;
  double fx;
  int iterations;
  bool converged;
};

/// Secant iteration for a root of f inside [lo, hi], where f(lo) and f(hi)
/// have opposite signs. An iterate that leaves the current bracket is replaced
/// by the bracket midpoint, so the bracket always shrinks. Stops once
/// |f(x)| <= ftol or the bracket is down to a few ulps.
template <typename F>
SecantResult secant_bracketed(const F& f, double lo, double hi, double flo, double fhi,
                              double ftol, int max_iters) {
  double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
  SecantResult best{std::abs(flo) < std::abs(fhi) ? lo : hi,
                    std::abs(flo) < std::abs(fhi) ? flo : fhi, 0, false};
  if (std::abs(best.fx) <= ftol) {
    best.converged = true;
    return best;
  }
  for (int it = 1; it <= max_iters; ++it) {
    double x2 = f1 != f0 ? x1 - f1 * (x1 - x0) / (f1 - f0) : 0.5 * (lo + hi);
    if (!(x2 > lo && x2 < hi)) x2 = 0.5 * (lo + hi);
    const double f2 = f(x2);

    if (std::abs(f2) < std::abs(best.fx)) best = {x2, f2, it, false};
    if (std::abs(f2) <= ftol) {
      best = {x2, f2, it, true};
      return best;
    }
    if ((f2 < 0) == (flo < 0)) {
      lo = x2;
      flo = f2;
    } else {
      hi = x2;
      fhi = f2;
    }
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::abs(hi)) {
      best.iterations = it;
      best.converged = true;
      return best;
    }
  }
  best.iterations = max_iters;
  return best;
}

}  // namespace bestab
