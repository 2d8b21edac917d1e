#pragma once

// (c, d)-plane sweeps of the hybrid system at fixed (a, b).

#include <filesystem>
#include <string>
#include <vector>

#include "bestab/hybrid.hpp"

namespace bestab {

enum class CellVerdict { StableBlue, UnstableRed, NotApplicableWhite, MarginalGray };

const char* to_string(CellVerdict v);

/// Blue for Lambda < 1 or convergence before return, red for Lambda > 1 or
/// divergence, gray for Marginal.
CellVerdict verdict_of(const LambdaResult& r);

struct SweepRanges {
  double c_min = -3.0;
  double c_max = 3.0;
  double d_min = 0.0;
  double d_max = 10.0;
};

struct Cell {
  CellVerdict verdict = CellVerdict::NotApplicableWhite;
  double lambda = 0.0;  // set for Defined and Marginal results
  std::string reason;   // constraint violation, undefined kind or failure
};

struct SweepGrid {
  double a = 0.0;
  double b = 0.0;
  SweepRanges ranges;
  int nc = 0;
  int nd = 0;
  /// Row-major by d then c: cells[j * nc + i] is column i, row j.
  std::vector<Cell> cells;

  double c_at(int i) const { return ranges.c_min + (i + 0.5) * (ranges.c_max - ranges.c_min) / nc; }
  double d_at(int j) const { return ranges.d_min + (j + 0.5) * (ranges.d_max - ranges.d_min) / nd; }
  const Cell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * nc + i]; }
};

/// Evaluates a single (a, b, c, d) point the way sweep cells are evaluated.
Cell evaluate_cell(const HybridParams& params, const EventConfig& cfg = {});

/// Reference implementation, one cell at a time.
SweepGrid sweep_serial(double a, double b, const SweepRanges& ranges, int nc, int nd,
                       const EventConfig& cfg = {});

/// OpenMP version with identical output. threads <= 0 means: use
/// BESTAB_THREADS if set and positive, else the OpenMP default.
SweepGrid sweep(double a, double b, const SweepRanges& ranges, int nc, int nd,
                const EventConfig& cfg = {}, int threads = 0);

/// Thread count sweep() will use for threads <= 0.
int sweep_thread_count();

enum class GridFormat { Csv, Pgm };

/// CSV: header "c,d,verdict,lambda_or_reason", rows by d then c.
/// PGM: plain P2, nc x nd, top row at d_max.
void render_grid(const SweepGrid& grid, const std::filesystem::path& path, GridFormat format);
std::string render_grid(const SweepGrid& grid, GridFormat format);

}  // namespace bestab
