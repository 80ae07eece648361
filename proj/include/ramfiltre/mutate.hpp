#pragma once

#include <array>
#include <string>
#include <string_view>

#include "ramfiltre/bigint.hpp"
#include "ramfiltre/errors.hpp"

namespace ramfiltre {

// Fault-injection registry for the verification harness.
//
// Each site names one constant inside one closed form.  Activating a site
// perturbs that constant by +1 (or bumps one exponent by 1), which must make
// at least one consistency check fail; the acceptance suite drives every
// site and asserts that the oracles notice.  With no site active the
// formulas are exactly the published ones.
enum class MutationSite {
  none,
  t12_const,           // divisible t_{1,2}: the +1 inside (p^{2b-1}+1)
  t12_nd_coeff,        // nondivisible t_{1,2}, a>b: the leading factor 2
  t12_nd_equal,        // nondivisible t_{1,2}, a=b: the trailing -1
  t11_pow,             // divisible t_{1,1}: exponent of the subtracted p^{2b}
  t11_nd_coeff,        // nondivisible t_{1,1}, a>b+1: the leading factor 2
  t11_nd_equal,        // nondivisible t_{1,1}, a=b+1: the trailing -1
  cyclo_shift,         // cyclotomic jump p^{a-1}-1: the -1
  level1_shift,        // divisible level-1 radical jump: the +1 in p^{b}-p+1
  level1_nd_shift,     // nondivisible level-1 radical jump: the constant term
  uniform_t2_coeff,    // uniform first-radical-jump closed form: the factor 2
  uniform_tnn1_coeff,  // uniform last-radical-jump closed form: the factor 2
  tau_prefix_pow,      // bound tau branch: exponent of the p^{clamp} prefactor
  closed_main_pow,     // general k>=2 closed form: main-term exponent
  closed_tail_shift,   // general k>=2 closed form: forces the shifted inner weight
  t_n1_main_pow,       // k=1 closed form: main-term exponent
};

inline constexpr std::array<std::pair<MutationSite, std::string_view>, 15> kMutationNames{{
    {MutationSite::t12_const, "t12_const"},
    {MutationSite::t12_nd_coeff, "t12_nd_coeff"},
    {MutationSite::t12_nd_equal, "t12_nd_equal"},
    {MutationSite::t11_pow, "t11_pow"},
    {MutationSite::t11_nd_coeff, "t11_nd_coeff"},
    {MutationSite::t11_nd_equal, "t11_nd_equal"},
    {MutationSite::cyclo_shift, "cyclo_shift"},
    {MutationSite::level1_shift, "level1_shift"},
    {MutationSite::level1_nd_shift, "level1_nd_shift"},
    {MutationSite::uniform_t2_coeff, "uniform_t2_coeff"},
    {MutationSite::uniform_tnn1_coeff, "uniform_tnn1_coeff"},
    {MutationSite::tau_prefix_pow, "tau_prefix_pow"},
    {MutationSite::closed_main_pow, "closed_main_pow"},
    {MutationSite::closed_tail_shift, "closed_tail_shift"},
    {MutationSite::t_n1_main_pow, "t_n1_main_pow"},
}};

inline MutationSite& active_mutation() {
  static MutationSite site = MutationSite::none;
  return site;
}

inline MutationSite parse_mutation(std::string_view name) {
  for (const auto& [site, n] : kMutationNames)
    if (n == name) return site;
  throw DomainError("unknown mutation site: " + std::string(name));
}

inline std::string_view mutation_name(MutationSite site) {
  for (const auto& [s, n] : kMutationNames)
    if (s == site) return n;
  return "none";
}

// Constant c at the given site; c+1 while that site is active.
inline Int mutated(MutationSite site, Int c) {
  if (active_mutation() == site) c += 1;
  return c;
}

inline unsigned long mutated_exp(MutationSite site, unsigned long e) {
  if (active_mutation() == site) e += 1;
  return e;
}

// RAII scope for the acceptance suite.
struct ScopedMutation {
  explicit ScopedMutation(MutationSite site) { active_mutation() = site; }
  ~ScopedMutation() { active_mutation() = MutationSite::none; }
  ScopedMutation(const ScopedMutation&) = delete;
  ScopedMutation& operator=(const ScopedMutation&) = delete;
};

}  // namespace ramfiltre
