#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ramfiltre/bigint.hpp"
#include "ramfiltre/errors.hpp"

namespace ramfiltre {

// The towers studied here are F(zeta_{p^r}, a_1^{1/p^{s_1}}, ..., a_n^{1/p^{s_n}})
// over an unramified p-adic base field F, with every a_i a unit-free radicand
// (a_i in O_F \ O_F^p) and p | v_F(a_i) for i < n.  The class of the last
// radicand splits the theory in two:
enum class VClass {
  Divisible,     // p divides v_F(a_n) as well
  NonDivisible,  // p does not divide v_F(a_n)
};

inline const char* vclass_name(VClass v) {
  return v == VClass::Divisible ? "divisible" : "nondivisible";
}

// A validated prime.  GMP's test is exact below 2^64 (Baillie-PSW has no
// known counterexample there and GMP augments it with Miller-Rabin rounds);
// larger inputs are accepted with overwhelming probability.
struct Prime {
  Int value;

  Prime() : value(3) {}  // placeholder for default-constructed aggregates

  explicit Prime(Int v) : value(std::move(v)) {
    if (value < 2) throw DomainError("p must be a prime >= 2");
    if (mpz_probab_prime_p(value.get_mpz_t(), 40) == 0)
      throw DomainError("p = " + value.get_str() + " is not prime");
  }

  bool is_two() const { return value == 2; }
};

// One tamely ramified radical block: a prime q != p together with the
// exponents e of the radicals b^{1/q^e} adjoined on top of the wild tower.
struct TameFactor {
  Int q;
  std::vector<unsigned> exponents;
};

// Full description of one tower.
struct RadicalSpec {
  Prime p;
  unsigned r = 1;           // cyclotomic level: zeta_{p^r} is adjoined
  std::vector<unsigned> s;  // radical exponents, one per a_i, each >= 1
  VClass vclass = VClass::Divisible;
  std::vector<TameFactor> tame;  // optional tame radical blocks
  bool p2_asserted = false;      // for p = 2 the degree hypothesis must be asserted
};

// A (possibly partial) tower field L_{r,s}.  Zero exponents are allowed:
// they mark radicals not yet adjoined during the tower walk.  r = 0 denotes
// the base field itself and appears only as a display value.
struct FieldLabel {
  unsigned r = 0;
  std::vector<unsigned> s;

  friend bool operator==(const FieldLabel& a, const FieldLabel& b) {
    return a.r == b.r && a.s == b.s;
  }
};

inline std::string label_str(const FieldLabel& f) {
  if (f.r == 0) return "F";
  std::string out = "L_{" + std::to_string(f.r) + ",(";
  for (size_t i = 0; i < f.s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(f.s[i]);
  }
  out += ")}";
  return out;
}

inline unsigned sum_s(const std::vector<unsigned>& s) {
  return std::accumulate(s.begin(), s.end(), 0u);
}

// [L_{r,s} : F] = (p-1) * p^{r-1+sum(s)} for r >= 1.
inline Int label_degree(const Int& p, const FieldLabel& f) {
  if (f.r == 0) return 1;
  return (p - 1) * pow_ui(p, f.r - 1 + sum_s(f.s));
}

// Throws DomainError naming the first violated clause.
inline void validate(const RadicalSpec& spec) {
  if (spec.s.empty()) throw DomainError("s is empty");
  if (spec.r < 1) throw DomainError("r < 1");
  for (unsigned si : spec.s)
    if (si < 1) throw DomainError("s contains a non-positive exponent");
  const unsigned n = static_cast<unsigned>(spec.s.size());
  const unsigned smax = *std::max_element(spec.s.begin(), spec.s.end());
  if (spec.r < smax) throw DomainError("r < max(s)");
  if (spec.vclass == VClass::Divisible) {
    if (!std::is_sorted(spec.s.begin(), spec.s.end()))
      throw DomainError("divisible class requires nondecreasing s");
  } else {
    if (n >= 2 && !std::is_sorted(spec.s.begin(), spec.s.end() - 1))
      throw DomainError("nondivisible class requires nondecreasing s_1..s_{n-1}");
  }
  if (spec.p.is_two() && !spec.p2_asserted) throw DomainError("p=2 hypothesis not asserted");
  for (size_t i = 0; i < spec.tame.size(); ++i) {
    const TameFactor& f = spec.tame[i];
    if (f.q < 2 || mpz_probab_prime_p(f.q.get_mpz_t(), 40) == 0)
      throw DomainError("tame factor base " + f.q.get_str() + " is not prime");
    if (f.q == spec.p.value) throw DomainError("tame factor base equals p");
    if (f.exponents.empty()) throw DomainError("tame factor has no exponents");
    for (unsigned e : f.exponents)
      if (e < 1) throw DomainError("tame factor has a non-positive exponent");
    for (size_t j = 0; j < i; ++j)
      if (spec.tame[j].q == f.q) throw DomainError("duplicate tame factor base");
  }
}

// Index shift of the field lattice: k = 1 lowers the cyclotomic level, k >= 2
// lowers radical exponent k-1.  This is the one-step move that defines the
// relative extensions whose unique jumps the engine computes.
inline FieldLabel shift_index(const FieldLabel& f, int k) {
  FieldLabel out = f;
  const int n = static_cast<int>(f.s.size());
  if (k < 1 || k > n + 1) throw DomainError("shift index k out of range");
  if (k == 1) {
    if (f.r < 2) throw DomainError("cyclotomic level cannot drop below 1");
    out.r -= 1;
  } else {
    if (f.s[k - 2] < 1) throw DomainError("radical exponent cannot drop below 0");
    out.s[k - 2] -= 1;
  }
  return out;
}

// D = prod q^{sum of exponents}: the total tame degree.  Coprime to p by
// construction.
inline Int tame_multiplier(const RadicalSpec& spec) {
  Int d = 1;
  for (const TameFactor& f : spec.tame) {
    unsigned long total = 0;
    for (unsigned e : f.exponents) total += e;
    d *= pow_ui(f.q, total);
  }
  return d;
}

}  // namespace ramfiltre
