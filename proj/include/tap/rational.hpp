#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace tap {

// All numeric quantities in the library are exact rationals; nothing in the
// solver or the colorings touches floating point.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Parses "p", "-p" or "p/q" into a canonical rational (lowest terms,
// positive denominator). Throws Error on malformed input or q = 0.
Rat parse_rat(const std::string& s);

// "p" when the denominator is 1, otherwise "p/q".
std::string rat_str(const Rat& r);

// Exact conversion to long; throws if r is not an integer or out of range.
long rat_to_long(const Rat& r);

// Least common multiple of the denominators over a range of rationals
// (1 for an empty range).
template <typename It>
Int lcm_denominators(It first, It last) {
  Int l = 1;
  for (It it = first; it != last; ++it) {
    l = boost::multiprecision::lcm(l, Int(denominator(*it)));
  }
  return l;
}

}  // namespace tap
