#include <charconv>
#include <fstream>
#include <string>

#include "bestab/errors.hpp"
#include "bestab/sweep.hpp"

namespace bestab {
namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

int gray_level(CellVerdict v) {
  switch (v) {
    case CellVerdict::NotApplicableWhite: return 255;
    case CellVerdict::StableBlue: return 64;
    case CellVerdict::UnstableRed: return 160;
    case CellVerdict::MarginalGray: return 128;
  }
  return 0;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

}  // namespace

std::string render_grid(const SweepGrid& g, GridFormat format) {
  std::string out;
  if (format == GridFormat::Csv) {
    out += "c,d,verdict,lambda_or_reason\n";
    for (int j = 0; j < g.nd; ++j) {
      for (int i = 0; i < g.nc; ++i) {
        const Cell& cell = g.at(i, j);
        append_number(out, g.c_at(i));
        out += ',';
        append_number(out, g.d_at(j));
        out += ',';
        out += to_string(cell.verdict);
        out += ',';
        if (cell.reason.empty())
          append_number(out, cell.lambda);
        else
          out += csv_field(cell.reason);
        out += '\n';
      }
    }
    return out;
  }

  out += "P2\n# white=255 (not applicable) blue=64 (stable) red=160 (unstable) gray=128 (marginal)\n";
  out += "# a=";
  append_number(out, g.a);
  out += " b=";
  append_number(out, g.b);
  out += " c=[";
  append_number(out, g.ranges.c_min);
  out += ',';
  append_number(out, g.ranges.c_max);
  out += "] left to right, d=[";
  append_number(out, g.ranges.d_min);
  out += ',';
  append_number(out, g.ranges.d_max);
  out += "] bottom to top\n";
  out += std::to_string(g.nc) + ' ' + std::to_string(g.nd) + "\n255\n";
  for (int j = g.nd - 1; j >= 0; --j) {
    for (int i = 0; i < g.nc; ++i) {
      if (i) out += ' ';
      out += std::to_string(gray_level(g.at(i, j).verdict));
    }
    out += '\n';
  }
  return out;
}

void render_grid(const SweepGrid& grid, const std::filesystem::path& path, GridFormat format) {
  const std::string text = render_grid(grid, format);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  f << text;
  if (!f.flush()) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace bestab
