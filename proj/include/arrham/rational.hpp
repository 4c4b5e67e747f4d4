#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace arrham {

// Exact scalar used for all combinatorial data and operator matrices.
// Backed by GMP; always kept in canonical form (gcd 1, positive denominator).
using Rat = mpq_class;
using RatVec = std::vector<Rat>;

inline Rat rat_of(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p/q", "p", or "-p/q". Whitespace is not accepted.
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rat r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: '" + s + "'");
  if (sgn(r.get_den()) == 0)
    throw std::invalid_argument("zero denominator in rational literal: '" + s + "'");
  r.canonicalize();
  return r;
}

// Serialization used everywhere a rational is printed: always "p/q".
inline std::string rat_str(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double rat_d(const Rat& r) { return r.get_d(); }

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

// Deterministic, platform-independent generator (splitmix64).  The
// library never uses std::uniform_* distributions: reports must be
// byte-identical for a given seed on every platform.
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish integer in [lo, hi]; bias is irrelevant for test draws.
  int64_t int_in(int64_t lo, int64_t hi) {
    if (hi < lo) throw std::invalid_argument("int_in: empty range");
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(next() % span);
  }

  // Random rational with numerator in [-mag, mag] and denominator in [1, den_max].
  Rat rat(int64_t mag, int64_t den_max) {
    return rat_of(int_in(-mag, mag), int_in(1, den_max));
  }

  Rat nonzero_rat(int64_t mag, int64_t den_max) {
    for (;;) {
      Rat r = rat(mag, den_max);
      if (!is_zero(r)) return r;
    }
  }

  Rat positive_rat(int64_t mag, int64_t den_max) {
    return rat_of(int_in(1, mag), int_in(1, den_max));
  }
};

}  // namespace arrham
