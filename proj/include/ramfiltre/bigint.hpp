#pragma once

#include <gmpxx.h>

#include <string>

#include "ramfiltre/errors.hpp"

namespace ramfiltre {

// All jump arithmetic is exact: integers are arbitrary precision and the
// Herbrand functions use exact rationals.  No floating point anywhere.
using Int = mpz_class;
using Rat = mpq_class;

inline Int pow_ui(const Int& base, unsigned long e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

// base^e as an exact rational; negative exponents arise only when the
// verification harness deliberately evaluates a known-bad formula variant.
inline Rat pow_si(const Int& base, long e) {
  if (e >= 0) return Rat(pow_ui(base, static_cast<unsigned long>(e)));
  Rat out(1, pow_ui(base, static_cast<unsigned long>(-e)));
  out.canonicalize();
  return out;
}

inline Int exact_div(const Int& num, const Int& den, const char* what) {
  if (den == 0) throw InternalError(std::string(what) + ": division by zero");
  if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
    throw IntegralityError(std::string(what) + ": " + num.get_str() + " is not divisible by " +
                           den.get_str());
  Int q;
  mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

// Rational -> integer, failing loudly if a denominator survived.
inline Int to_integer(const Rat& x, const char* what) {
  if (x.get_den() != 1)
    throw IntegralityError(std::string(what) + ": value " + x.get_str() + " is not an integer");
  return x.get_num();
}

inline std::string rat_str(const Rat& x) {
  // Canonical "num/den" with den >= 1, "/1" kept for schema uniformity.
  Rat c = x;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

}  // namespace ramfiltre
