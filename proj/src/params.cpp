#include "bestab/params.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "bestab/errors.hpp"

namespace bestab {
namespace {

std::string num(double v) {
  char buf[32];
  return {buf, std::to_chars(buf, buf + sizeof buf, v).ptr};
}

}  // namespace

std::string HybridParams::violation() const {
  std::ostringstream os;
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d))) {
    os << "parameters must be finite";
  } else if (!(b > a * a / 4)) {
    os << "constraint b > a^2/4 violated (a = " << num(a) << ", b = " << num(b) << ")";
  } else if (!(d > 0)) {
    os << "constraint d > 0 violated (d = " << num(d) << ")";
  } else if (c > 0 && !(d > c * c / 4)) {
    os << "constraint d > c^2/4 for c > 0 violated (c = " << num(c) << ", d = " << num(d) << ")";
  }
  return os.str();
}

bool HybridParams::valid() const {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d) &&
         b > a * a / 4 && d > 0 && (c <= 0 || d > c * c / 4);
}

void HybridParams::validate() const {
  if (auto v = violation(); !v.empty()) throw Error(ErrorKind::ConstraintViolation, v);
}

NormalFormParams to_normal_form(const HybridParams& p) {
  return {p.a - 1.0, p.b - p.a, -p.b, p.c, p.d};
}

}  // namespace bestab
