#include "tap/rational.hpp"

#include <limits>

namespace tap {

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw Error("empty rational literal");
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rat(Int(s));
    }
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw Error("zero denominator in '" + s + "'");
    // Constructing from an integer pair canonicalizes; constructing from the
    // raw string does not.
    return Rat(num, den);
  } catch (const std::runtime_error& e) {
    throw Error("bad rational literal '" + s + "': " + e.what());
  }
}

std::string rat_str(const Rat& r) { return r.str(); }

long rat_to_long(const Rat& r) {
  if (denominator(r) != 1) {
    throw Error("expected an integer, got " + rat_str(r));
  }
  Int n = numerator(r);
  if (n > std::numeric_limits<long>::max() || n < std::numeric_limits<long>::min()) {
    throw Error("integer out of range: " + n.str());
  }
  return static_cast<long>(n);
}

}  // namespace tap
