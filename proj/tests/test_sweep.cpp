#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bestab/errors.hpp"
#include "bestab/sweep.hpp"

using namespace bestab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool same_cells(const SweepGrid& a, const SweepGrid& b) {
  if (a.cells.size() != b.cells.size()) return false;
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    const Cell& x = a.cells[k];
    const Cell& y = b.cells[k];
    if (x.verdict != y.verdict || x.lambda != y.lambda || x.reason != y.reason) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("evaluate_cell: examples") {
  CHECK(evaluate_cell({-1.2, 0.5, 2, 0.5}).verdict == CellVerdict::NotApplicableWhite);
  const Cell blue = evaluate_cell({0.2, 5, 0.2, 1});
  CHECK(blue.verdict == CellVerdict::StableBlue);
  CHECK(blue.lambda < 1);
  CHECK(evaluate_cell({-0.2, 0.5, -0.5, 8}).verdict == CellVerdict::UnstableRed);
}

TEST_CASE("verdict_of follows the coloring rules") {
  using K = LambdaResult::Kind;
  CHECK(verdict_of({K::Defined, 0.5, {}}) == CellVerdict::StableBlue);
  CHECK(verdict_of({K::Defined, 1.5, {}}) == CellVerdict::UnstableRed);
  CHECK(verdict_of({K::UndefinedConverged, 0, {}}) == CellVerdict::StableBlue);
  CHECK(verdict_of({K::UndefinedDiverged, 0, {}}) == CellVerdict::UnstableRed);
  CHECK(verdict_of({K::Marginal, 1, {}}) == CellVerdict::MarginalGray);
}

TEST_CASE("sweep: white cells match the constraint predicate, others follow lambda") {
  const SweepGrid g = sweep_serial(-1.2, 0.5, {}, 24, 20);
  int kinds[4] = {0, 0, 0, 0};
  for (int j = 0; j < g.nd; ++j) {
    for (int i = 0; i < g.nc; ++i) {
      const HybridParams p{g.a, g.b, g.c_at(i), g.d_at(j)};
      const Cell& cell = g.at(i, j);
      ++kinds[static_cast<int>(cell.verdict)];
      CHECK((cell.verdict == CellVerdict::NotApplicableWhite) == !p.valid());
      if (p.valid()) CHECK(cell.verdict == verdict_of(lambda(p)));
    }
  }
  CHECK(kinds[static_cast<int>(CellVerdict::StableBlue)] > 0);
  CHECK(kinds[static_cast<int>(CellVerdict::NotApplicableWhite)] > 0);
}

TEST_CASE("sweep: cell centers") {
  const SweepGrid g = sweep_serial(0.2, 5, {-3, 3, 0, 10}, 2, 4);
  CHECK(g.c_at(0) == -1.5);
  CHECK(g.c_at(1) == 1.5);
  CHECK(g.d_at(0) == 1.25);
  CHECK(g.d_at(3) == 8.75);
}

TEST_CASE("sweep: identical across thread counts and runs") {
  const SweepGrid ref = sweep_serial(0.2, 2, {}, 30, 30);
  for (int threads : {1, 2, 3, 8}) CHECK(same_cells(ref, sweep(0.2, 2, {}, 30, 30, {}, threads)));
  CHECK(render_grid(ref, GridFormat::Csv) ==
        render_grid(sweep(0.2, 2, {}, 30, 30, {}, 4), GridFormat::Csv));
}

TEST_CASE("sweep: invalid (a, b) makes every cell white") {
  const SweepGrid g = sweep_serial(1.2, 0.3, {}, 5, 5);
  for (const Cell& c : g.cells) CHECK(c.verdict == CellVerdict::NotApplicableWhite);
}

TEST_CASE("sweep: grid preconditions") {
  CHECK_THROWS_AS(sweep_serial(0.2, 5, {}, 1, 5), Error);
  CHECK_THROWS_AS(sweep(0.2, 5, {3, -3, 0, 10}, 5, 5), Error);
}

TEST_CASE("sweep_thread_count honours the environment") {
  ::setenv("BESTAB_THREADS", "3", 1);
  CHECK(sweep_thread_count() == 3);
  ::setenv("BESTAB_THREADS", "0", 1);
  CHECK(sweep_thread_count() >= 1);
  ::setenv("BESTAB_THREADS", "junk", 1);
  CHECK(sweep_thread_count() >= 1);
  ::unsetenv("BESTAB_THREADS");
}

TEST_CASE("render_grid: CSV of an all-white grid") {
  const SweepGrid g = sweep_serial(0.0, 1.0, {1, 3, 0, 0.2}, 2, 2);
  const std::string csv = render_grid(g, GridFormat::Csv);
  CHECK(csv ==
        "c,d,verdict,lambda_or_reason\n"
        "1.5,0.05,NotApplicableWhite,c > 0 and d <= c^2/4\n"
        "2.5,0.05,NotApplicableWhite,c > 0 and d <= c^2/4\n"
        "1.5,0.15000000000000002,NotApplicableWhite,c > 0 and d <= c^2/4\n"
        "2.5,0.15000000000000002,NotApplicableWhite,c > 0 and d <= c^2/4\n");
}

TEST_CASE("render_grid: PGM layout and determinism") {
  const SweepGrid g = sweep_serial(0.2, 5, {}, 7, 5);
  const fs::path p = fs::temp_directory_path() / "bestab_test_grid.pgm";
  render_grid(g, p, GridFormat::Pgm);
  const std::string first = slurp(p);
  render_grid(g, p, GridFormat::Pgm);
  CHECK(slurp(p) == first);

  std::istringstream in(first);
  std::string magic, line;
  in >> magic;
  CHECK(magic == "P2");
  std::getline(in, line);
  int comments = 0;
  while (in.peek() == '#') {
    std::getline(in, line);
    ++comments;
  }
  CHECK(comments >= 1);
  int w = 0, h = 0, maxval = 0;
  in >> w >> h >> maxval;
  CHECK(w == 7);
  CHECK(h == 5);
  CHECK(maxval == 255);
  // Top row is d_max.
  for (int j = h - 1; j >= 0; --j)
    for (int i = 0; i < w; ++i) {
      int v = -1;
      in >> v;
      const int expected = [&] {
        switch (g.at(i, j).verdict) {
          case CellVerdict::NotApplicableWhite: return 255;
          case CellVerdict::StableBlue: return 64;
          case CellVerdict::UnstableRed: return 160;
          case CellVerdict::MarginalGray: return 128;
        }
        return -1;
      }();
      CHECK(v == expected);
    }
  fs::remove(p);
  CHECK_THROWS_AS(render_grid(g, "/nonexistent/dir/g.pgm", GridFormat::Pgm), Error);
}
