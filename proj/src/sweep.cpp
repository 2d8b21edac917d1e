#include "bestab/sweep.hpp"

#include <omp.h>

#include <cstdlib>
#include <iostream>

#include "bestab/errors.hpp"

namespace bestab {
namespace {

void check_grid(const SweepRanges& r, int nc, int nd) {
  if (nc < 2 || nd < 2 || !(r.c_min < r.c_max) || !(r.d_min < r.d_max))
    throw Error(ErrorKind::ConstraintViolation,
                "sweep needs nc, nd >= 2 and increasing c and d ranges");
}

SweepGrid empty_grid(double a, double b, const SweepRanges& ranges, int nc, int nd) {
  check_grid(ranges, nc, nd);
  SweepGrid g{a, b, ranges, nc, nd, {}};
  g.cells.resize(static_cast<std::size_t>(nc) * nd);
  if (!(b > a * a / 4))
    std::cerr << "warning: b <= a^2/4 for (a, b) = (" << a << ", " << b
              << "), every cell is white\n";
  return g;
}

Cell cell_at(const SweepGrid& g, std::size_t k, const EventConfig& cfg) {
  const int i = static_cast<int>(k % g.nc);
  const int j = static_cast<int>(k / g.nc);
  return evaluate_cell({g.a, g.b, g.c_at(i), g.d_at(j)}, cfg);
}

}  // namespace

const char* to_string(CellVerdict v) {
  switch (v) {
    case CellVerdict::StableBlue: return "StableBlue";
    case CellVerdict::UnstableRed: return "UnstableRed";
    case CellVerdict::NotApplicableWhite: return "NotApplicableWhite";
    case CellVerdict::MarginalGray: return "MarginalGray";
  }
  return "?";
}

CellVerdict verdict_of(const LambdaResult& r) {
  switch (r.kind) {
    case LambdaResult::Kind::Defined:
      return r.value < 1 ? CellVerdict::StableBlue : CellVerdict::UnstableRed;
    case LambdaResult::Kind::UndefinedConverged: return CellVerdict::StableBlue;
    case LambdaResult::Kind::UndefinedDiverged: return CellVerdict::UnstableRed;
    case LambdaResult::Kind::Marginal: return CellVerdict::MarginalGray;
  }
  return CellVerdict::MarginalGray;
}

Cell evaluate_cell(const HybridParams& params, const EventConfig& cfg) {
  Cell cell;
  if (!params.valid()) {
    if (!(params.b > params.a * params.a / 4))
      cell.reason = "b <= a^2/4";
    else if (!(params.d > 0))
      cell.reason = "d <= 0";
    else
      cell.reason = "c > 0 and d <= c^2/4";
    return cell;
  }
  try {
    const LambdaResult r = lambda(params, cfg);
    cell.verdict = verdict_of(r);
    if (r.defined())
      cell.lambda = r.value;
    else
      cell.reason = to_string(r.kind);
  } catch (const Error& e) {
    cell.verdict = CellVerdict::MarginalGray;
    cell.reason = std::string(to_string(e.kind())) + ": " + e.what();
    std::cerr << "warning: cell (a, b, c, d) = (" << params.a << ", " << params.b << ", "
              << params.c << ", " << params.d << ") failed: " << cell.reason << '\n';
  }
  return cell;
}

SweepGrid sweep_serial(double a, double b, const SweepRanges& ranges, int nc, int nd,
                       const EventConfig& cfg) {
  SweepGrid g = empty_grid(a, b, ranges, nc, nd);
  for (std::size_t k = 0; k < g.cells.size(); ++k) g.cells[k] = cell_at(g, k, cfg);
  return g;
}

int sweep_thread_count() {
  if (const char* env = std::getenv("BESTAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return omp_get_max_threads();
}

SweepGrid sweep(double a, double b, const SweepRanges& ranges, int nc, int nd,
                const EventConfig& cfg, int threads) {
  SweepGrid g = empty_grid(a, b, ranges, nc, nd);
  const int nthreads = threads > 0 ? threads : sweep_thread_count();
  const long n = static_cast<long>(g.cells.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads)
  for (long k = 0; k < n; ++k) g.cells[k] = cell_at(g, static_cast<std::size_t>(k), cfg);
  return g;
}

}  // namespace bestab
