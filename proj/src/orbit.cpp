#include "bestab/orbit.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "bestab/errors.hpp"

namespace bestab {

char regime_letter(Regime r) {
  switch (r) {
    case Regime::L: return 'L';
    case Regime::R: return 'R';
    case Regime::S: return 'S';
  }
  return '?';
}

const char* to_string(OrbitTerminal t) {
  switch (t) {
    case OrbitTerminal::Converged: return "converged";
    case OrbitTerminal::Diverged: return "diverged";
    case OrbitTerminal::Timeout: return "timeout";
    case OrbitTerminal::ReachedEvent: return "reached event";
  }
  return "?";
}

std::size_t Orbit::sample_count() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.samples.size();
  return n;
}

namespace {

void put(std::string& out, double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

}  // namespace

void export_orbit(const Orbit& orbit, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  std::string line;
  out << "t,x1,x2,x3,regime\n";
  for (const auto& seg : orbit.segments) {
    for (const auto& s : seg.samples) {
      line.clear();
      put(line, s.t);
      for (int i = 0; i < 3; ++i) {
        line += ',';
        put(line, s.x[i]);
      }
      line += ',';
      line += regime_letter(seg.regime);
      line += '\n';
      out << line;
    }
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

Orbit read_orbit_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "t,x1,x2,x3,regime")
    throw Error(ErrorKind::Io, "bad orbit CSV header in " + path.string());

  Orbit orbit;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell[5];
    for (auto& c : cell) std::getline(row, c, ',');
    OrbitSample s{std::stod(cell[0]), Vec3(std::stod(cell[1]), std::stod(cell[2]),
                                           std::stod(cell[3]))};
    Regime r = cell[4] == "L" ? Regime::L : cell[4] == "R" ? Regime::R : Regime::S;
    if (orbit.segments.empty() || orbit.segments.back().regime != r)
      orbit.segments.push_back({r, {}});
    orbit.segments.back().samples.push_back(s);
  }
  return orbit;
}

}  // namespace bestab
