#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace spectra {

// Exact rational scalar. All parameter and matrix arithmetic in the library
// is over Rat; no floating point anywhere.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

inline bool is_integer(const Rat& x) { return denominator(x) == 1; }

inline std::string rat_to_string(const Rat& x) {
  if (is_integer(x)) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

// Accepts "p", "-p", "p/q".
inline Rat rat_from_string(const std::string& s) {
  auto bad = [&] { throw std::invalid_argument("bad rational literal: " + s); };
  if (s.empty()) bad();
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) bad();
    return Rat(num, den);
  } catch (const std::exception&) {
    bad();
  }
  return Rat(0);  // unreachable
}

}  // namespace spectra
