#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bestab/linalg.hpp"

namespace bestab {

/// Which vector field governs a stretch of trajectory.
enum class Regime { L, R, S };

char regime_letter(Regime r);

struct OrbitSample {
  double t;
  Vec3 x;
};

struct OrbitSegment {
  Regime regime;
  std::vector<OrbitSample> samples;
};

enum class OrbitTerminal { Converged, Diverged, Timeout, ReachedEvent };

const char* to_string(OrbitTerminal t);

/// A trajectory split at every regime switch. Consecutive segments meet at the
/// switching point: the earlier one ends just before it and the later one
/// starts just after, so sample times stay strictly increasing.
struct Orbit {
  std::vector<OrbitSegment> segments;
  OrbitTerminal terminal = OrbitTerminal::Timeout;
  std::string diagnostic;

  std::size_t sample_count() const;
  const OrbitSample& back() const { return segments.back().samples.back(); }
};

/// CSV with header "t,x1,x2,x3,regime", one row per sample in time order.
void export_orbit(const Orbit& orbit, const std::filesystem::path& path);

/// Reads a file written by export_orbit back into segments.
Orbit read_orbit_csv(const std::filesystem::path& path);

}  // namespace bestab
