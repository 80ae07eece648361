#pragma once

#include "ramfiltre/bigint.hpp"
#include "ramfiltre/errors.hpp"
#include "ramfiltre/model.hpp"
#include "ramfiltre/mutate.hpp"

namespace ramfiltre {

// Single-radical towers L_{a,b} = F(zeta_{p^a}, x^{1/p^b}).  Each one-step
// relative extension has a unique ramification jump:
//   k = 1: the cyclotomic step L_{a,b} / L_{a-1,b}, written t11(a,b);
//   k = 2: the radical step    L_{a,b} / L_{a,b-1}, written t12(a,b).
// The closed forms below cover the whole quadrant a >= 1, b >= 0 (k = 1
// additionally needs a >= 2; the a = 1 cyclotomic step is tame and its jump
// 0 is emitted only by the filtration builder).
struct N1Query {
  Int p;
  unsigned a = 1;
  unsigned b = 0;
  int k = 1;  // 1 = cyclotomic step, 2 = radical step
  VClass vclass = VClass::Divisible;
};

// Which dispatch clause produced the value; recorded for tests and tracing.
enum class N1Clause {
  cyclotomic,      // b = 0
  div_t12_stable,  // divisible, k=2, a >= b (value independent of a)
  div_t12_low,     // divisible, k=2, a < b
  div_t11,         // divisible, k=1, a > b
  div_t11_reduced, // divisible, k=1, a <= b: reduces to b = a-1 first
  nd_t12_high,     // nondivisible, k=2, a > b
  nd_t12_equal,    // nondivisible, k=2, a = b
  nd_t12_low,      // nondivisible, k=2, a < b
  nd_t11_high,     // nondivisible, k=1, a > b+1
  nd_t11_boundary, // nondivisible, k=1, a = b+1
  nd_t11_reduced,  // nondivisible, k=1, a <= b: reduces to b = a-1 first
};

inline const char* n1_clause_name(N1Clause c) {
  switch (c) {
    case N1Clause::cyclotomic: return "cyclotomic";
    case N1Clause::div_t12_stable: return "div_t12_stable";
    case N1Clause::div_t12_low: return "div_t12_low";
    case N1Clause::div_t11: return "div_t11";
    case N1Clause::div_t11_reduced: return "div_t11_reduced";
    case N1Clause::nd_t12_high: return "nd_t12_high";
    case N1Clause::nd_t12_equal: return "nd_t12_equal";
    case N1Clause::nd_t12_low: return "nd_t12_low";
    case N1Clause::nd_t11_high: return "nd_t11_high";
    case N1Clause::nd_t11_boundary: return "nd_t11_boundary";
    case N1Clause::nd_t11_reduced: return "nd_t11_reduced";
  }
  return "?";
}

struct N1Result {
  Int value;
  N1Clause clause;
};

// Jump of the cyclotomic step F(zeta_{p^a}) / F(zeta_{p^{a-1}}): p^{a-1} - 1.
inline Int cyclotomic_jump(const Int& p, unsigned a) {
  if (a < 2) throw DomainError("cyclotomic-step jump needs a >= 2");
  return mutated(MutationSite::cyclo_shift, pow_ui(p, a - 1) - 1);
}

// Jump of the radical step at cyclotomic level 1 with radical exponent s+1,
// i.e. t12(1, s+1): p^{s+1} - p + 1 (divisible) or p^{s+1} (nondivisible).
inline Int t1_level1(const Int& p, unsigned s, VClass vc) {
  if (vc == VClass::Divisible)
    return pow_ui(p, s + 1) - p + mutated(MutationSite::level1_shift, 1);
  return mutated(MutationSite::level1_nd_shift, pow_ui(p, s + 1));
}

inline N1Result t1_traced(const N1Query& q) {
  const Int& p = q.p;
  if (q.a < 1) throw DomainError("a < 1");
  if (q.k != 1 && q.k != 2) throw DomainError("k must be 1 or 2 when n = 1");
  if (q.k == 2 && q.b < 1) throw DomainError("radical-step jump needs b >= 1");
  if (q.k == 1 && q.a < 2) throw DomainError("cyclotomic-step jump needs a >= 2");

  unsigned a = q.a, b = q.b;
  if (q.k == 1 && b == 0) return {cyclotomic_jump(p, a), N1Clause::cyclotomic};

  if (q.vclass == VClass::Divisible) {
    if (q.k == 2) {
      // t12 stabilises once a >= b; below that it grows with a.
      if (a >= b) {
        Int tail = exact_div((p - 1) * (pow_ui(p, 2 * b - 1) + mutated(MutationSite::t12_const, 1)),
                             p + 1, "div t12");
        return {pow_ui(p, 2 * b - 1) - tail, N1Clause::div_t12_stable};
      }
      Int tail = exact_div((p - 1) * (pow_ui(p, 2 * a - 1) + mutated(MutationSite::t12_const, 1)),
                           p + 1, "div t12");
      return {pow_ui(p, a + b - 1) - tail, N1Clause::div_t12_low};
    }
    // k = 1.  For a <= b the value equals the one at b = a-1 (the radical
    // exponent beyond the cyclotomic level no longer moves this jump).
    N1Clause clause = N1Clause::div_t11;
    if (a <= b) {
      b = a - 1;
      clause = N1Clause::div_t11_reduced;
    }
    if (b == 0) return {cyclotomic_jump(p, a), N1Clause::cyclotomic};
    Int tail = exact_div((p - 1) * (pow_ui(p, 2 * b) - 1), p + 1, "div t11");
    return {pow_ui(p, a + b - 1) - pow_ui(p, mutated_exp(MutationSite::t11_pow, 2 * b)) + tail,
            clause};
  }

  // Nondivisible class.
  if (q.k == 2) {
    if (a > b)
      return {exact_div(mutated(MutationSite::t12_nd_coeff, 2) * pow_ui(p, 2 * b) + p - 1, p + 1,
                        "nd t12 high"),
              N1Clause::nd_t12_high};
    if (a == b)
      return {exact_div(pow_ui(p, 2 * b) + pow_ui(p, 2 * b - 2) + p -
                            mutated(MutationSite::t12_nd_equal, 1),
                        p + 1, "nd t12 equal"),
              N1Clause::nd_t12_equal};
    Int tail = exact_div(pow_ui(p, 2 * a - 1) - pow_ui(p, 2 * a - 2) - p + 1, p + 1, "nd t12 low");
    return {pow_ui(p, a + b - 1) - tail, N1Clause::nd_t12_low};
  }
  // k = 1.  For a <= b the value equals the one at b = a-1, which then sits
  // on the a = b+1 boundary.
  N1Clause clause = N1Clause::nd_t11_boundary;
  if (a <= b) {
    b = a - 1;
    clause = N1Clause::nd_t11_reduced;
  }
  if (b == 0) return {cyclotomic_jump(p, a), N1Clause::cyclotomic};
  if (a == b + 1)
    return {exact_div(pow_ui(p, 2 * b) - pow_ui(p, 2 * b - 1) + p -
                          mutated(MutationSite::t11_nd_equal, 1),
                      p + 1, "nd t11 boundary"),
            clause};
  Int tail = exact_div(mutated(MutationSite::t11_nd_coeff, 2) * pow_ui(p, 2 * b + 1) - p + 1, p + 1,
                       "nd t11 high");
  return {pow_ui(p, a + b - 1) - tail, N1Clause::nd_t11_high};
}

inline Int t1(const N1Query& q) { return t1_traced(q).value; }

}  // namespace ramfiltre
