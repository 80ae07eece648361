#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ramfiltre/bigint.hpp"
#include "ramfiltre/engine.hpp"
#include "ramfiltre/errors.hpp"
#include "ramfiltre/model.hpp"

namespace ramfiltre {

// One level of the lower-numbering ramification filtration.  The zero level
// carries family "zero"; every other level corresponds to one step of the
// distinguished tower walk and records which enumeration family produced
// it, the t_{n,k} label of the step (display index k and the field the step
// lands in), the field fixed by the group at this jump, and that group's
// order.
struct FiltrationLevel {
  Int jump;
  std::string family;   // "zero", "seed", "i", "ii", "iii", "iv"
  int k = 0;            // display index of t_{n,k}; 0 on the zero level
  FieldLabel query;     // the (level, vector) inside the t_{n,k}(...) label
  FieldLabel fixed_field;
  Int group_order;
};

struct Filtration {
  RadicalSpec spec;
  Int tame_multiplier = 1;
  Int g0_order = 1;  // order of the full inertia group (tame part included)
  Int g1_order = 1;  // order of the wild inertia group
  std::vector<FiltrationLevel> levels;  // levels[0] is the zero level
};

// A jump query attached to a family tag, as produced by the direct
// enumeration theorem (no tower walk involved).
struct FamilyQuery {
  std::string family;
  int k = 0;        // display index
  FieldLabel query;  // displayed label argument
  JumpQuery jq;      // evaluable query (its k may differ from the display k)
};

inline unsigned sum_of(const std::vector<unsigned>& v) {
  unsigned t = 0;
  for (unsigned x : v) t += x;
  return t;
}

// ---------------------------------------------------------------------------
// The distinguished tower walk: the chain of subfields whose fixed groups
// realise the filtration.  Every step raises the cyclotomic level by one or
// bumps every lagging radical exponent by one; the two classes interleave
// the moves differently.
// ---------------------------------------------------------------------------
inline std::vector<FieldLabel> tower_sequence(const RadicalSpec& spec) {
  validate(spec);
  const unsigned n = static_cast<unsigned>(spec.s.size());
  std::vector<FieldLabel> seq;
  FieldLabel cur{1, std::vector<unsigned>(n, 0)};
  seq.push_back(cur);
  const size_t guard = spec.r + sum_of(spec.s) + n + 2;

  auto bump = [&] {
    for (unsigned i = 0; i < n; ++i) cur.s[i] = std::min(spec.s[i], cur.s[i] + 1);
  };

  if (spec.vclass == VClass::Divisible) {
    while (!(cur.r == spec.r && cur.s == spec.s)) {
      if (seq.size() > guard) throw InternalError("tower walk exceeded its step bound");
      if (cur.s == spec.s) cur.r += 1;
      else if (cur.r == cur.s.back()) cur.r += 1;
      else bump();
      seq.push_back(cur);
    }
    return seq;
  }

  // Nondivisible: the walk starts by adjoining the first n-1 radicals at
  // exponent one in a single step, then alternates raises and bumps so that
  // the cyclotomic level always stays ahead of the divisible block.
  if (n >= 2) {
    bool moved = false;
    for (unsigned i = 0; i + 1 < n; ++i) {
      unsigned v = std::min(spec.s[i], 1u);
      if (v != cur.s[i]) moved = true;
      cur.s[i] = v;
    }
    if (moved) seq.push_back(cur);
  }
  while (!(cur.r == spec.r && cur.s == spec.s)) {
    if (seq.size() > guard) throw InternalError("tower walk exceeded its step bound");
    const unsigned shat = (n >= 2 && cur.s[n - 1] < cur.s[n - 2]) ? cur.s[n - 2]
                                                                  : cur.s[n - 1] + 1;
    bool do_bump;
    if (cur.s == spec.s) do_bump = false;
    else if (cur.r == spec.r) do_bump = true;
    else if (cur.r > shat) do_bump = true;
    else if (cur.r == shat) do_bump = false;
    else throw InternalError("tower walk: cyclotomic level fell below its floor");
    if (do_bump) bump();
    else cur.r += 1;
    seq.push_back(cur);
  }
  return seq;
}

namespace detail {

struct StepClass {
  std::string family;
  int display_k = 0;
  int eval_k = 0;
};

inline StepClass classify_step(const RadicalSpec& spec, const FieldLabel& lo,
                               const FieldLabel& hi, bool is_first) {
  const int n = static_cast<int>(spec.s.size());
  StepClass out;
  if (hi.r == lo.r + 1) {
    // cyclotomic raise
    out.display_k = out.eval_k = 1;
    if (spec.vclass == VClass::Divisible)
      out.family = (hi.r > spec.s.back()) ? "i" : "ii";
    else
      out.family = "ii";
    return out;
  }
  if (hi.r != lo.r) throw InternalError("tower step changes r by more than one");
  const bool last_moved = n >= 1 && hi.s[n - 1] != lo.s[n - 1];
  const bool seed = is_first && spec.vclass == VClass::NonDivisible && !last_moved;
  if (seed) {
    // The opening step of the nondivisible walk adjoins several radicals at
    // once; its jump equals the one of the last divisible sub-step, but the
    // step is labelled like a full radical adjunction.
    out.family = "seed";
    out.display_k = n + 1;
    out.eval_k = n;  // highest moved coordinate is n-1 (1-based)
    return out;
  }
  if (last_moved) {
    out.display_k = out.eval_k = n + 1;
    if (spec.vclass == VClass::Divisible) out.family = "iii";
    else if (spec.r == spec.s.back() && hi.r == spec.r && hi.s == spec.s) out.family = "i";
    else out.family = "iv";
    return out;
  }
  // bump that leaves the distinguished last coordinate alone (nondivisible
  // only): the highest moved coordinate is n-1, so the step is the k = n
  // radical step.
  out.display_k = out.eval_k = n;
  out.family = "iii";
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Direct enumeration of the jumps, family by family, without walking the
// tower.  The multiset of values must coincide with the walk's jumps.
// ---------------------------------------------------------------------------
inline std::vector<FamilyQuery> enumerate_jump_families(const RadicalSpec& spec) {
  validate(spec);
  const int n = static_cast<int>(spec.s.size());
  const unsigned r = spec.r;
  const std::vector<unsigned>& s = spec.s;
  const unsigned sn = s.back();
  std::vector<FamilyQuery> out;

  auto clamp_all = [&](unsigned c) {
    std::vector<unsigned> v(n);
    for (int i = 0; i < n; ++i) v[i] = std::min(s[i], c);
    return v;
  };

  if (spec.vclass == VClass::Divisible) {
    for (unsigned sp = 1; sp + 1 <= sn; ++sp) {
      FieldLabel q{sp + 1, clamp_all(sp)};
      out.push_back({"ii", 1, q, JumpQuery{q.r, q.s, 1, spec.vclass}});
    }
    for (unsigned rho = sn + 1; rho <= r; ++rho) {
      FieldLabel q{rho, s};
      out.push_back({"i", 1, q, JumpQuery{q.r, q.s, 1, spec.vclass}});
    }
    for (unsigned sp = 1; sp <= sn; ++sp) {
      FieldLabel q{sp, clamp_all(sp)};
      out.push_back({"iii", n + 1, q, JumpQuery{q.r, q.s, n + 1, spec.vclass}});
    }
    return out;
  }

  if (n >= 2) {
    std::vector<unsigned> v(n, 0);
    for (int i = 0; i + 1 < n; ++i) v[i] = std::min(s[i], 1u);
    FieldLabel q{1, v};
    out.push_back({"seed", n + 1, q, JumpQuery{q.r, q.s, n, spec.vclass}});
  }
  for (unsigned sp = 1; sp + 1 <= r; ++sp) {
    std::vector<unsigned> v(n);
    for (int i = 0; i + 1 < n; ++i) v[i] = std::min(s[i], sp);
    v[n - 1] = std::min(sp - 1, sn);
    FieldLabel q{sp + 1, v};
    out.push_back({"ii", 1, q, JumpQuery{q.r, q.s, 1, spec.vclass}});
  }
  if (n >= 2) {
    for (unsigned c = sn + 2; c <= s[n - 2]; ++c) {
      std::vector<unsigned> v(n);
      for (int i = 0; i + 2 < n; ++i) v[i] = std::min(s[i], c);
      v[n - 2] = c;
      v[n - 1] = sn;
      FieldLabel q{c, v};
      out.push_back({"iii", n, q, JumpQuery{q.r, q.s, n, spec.vclass}});
    }
  }
  for (unsigned sp = 1; sp <= std::min(sn, r - 1); ++sp) {
    std::vector<unsigned> v(n);
    for (int i = 0; i + 1 < n; ++i) v[i] = std::min(s[i], sp + 1);
    v[n - 1] = sp;
    FieldLabel q{sp + 1, v};
    out.push_back({"iv", n + 1, q, JumpQuery{q.r, q.s, n + 1, spec.vclass}});
  }
  if (r == sn) {
    FieldLabel q{r, s};
    out.push_back({"i", n + 1, q, JumpQuery{q.r, q.s, n + 1, spec.vclass}});
  }
  return out;
}

// Multiply the tame part in: every nonzero jump scales by d and the full
// inertia order (the zero level only) picks up the factor d.
inline Filtration scale_tame(Filtration f, const Int& d) {
  if (d < 1) throw DomainError("tame degree must be >= 1");
  if (d == 1) return f;
  f.tame_multiplier *= d;
  f.g0_order *= d;
  for (auto& lv : f.levels) {
    if (lv.jump == 0) lv.group_order *= d;
    else lv.jump *= d;
  }
  return f;
}

inline Filtration build_filtration(const RadicalSpec& spec, const JumpEngine& eng) {
  validate(spec);
  if (eng.prime() != spec.p.value) throw DomainError("engine prime differs from spec prime");
  const Int& p = spec.p.value;
  const unsigned total_s = sum_of(spec.s);

  Filtration f;
  f.spec = spec;
  f.g1_order = pow_ui(p, spec.r - 1 + static_cast<unsigned long>(total_s));
  f.g0_order = (p - 1) * f.g1_order;

  auto seq = tower_sequence(spec);
  f.levels.push_back({Int(0), "zero", 0, FieldLabel{}, FieldLabel{}, f.g0_order});

  Int prev = 0;
  for (size_t i = 0; i + 1 < seq.size(); ++i) {
    const FieldLabel& lo = seq[i];
    const FieldLabel& hi = seq[i + 1];
    auto cls = detail::classify_step(spec, lo, hi, i == 0);
    JumpQuery jq{hi.r, hi.s, cls.eval_k, spec.vclass};
    Int t = eng.t_nk_rec(jq);
    if (t <= prev)
      throw OrderingError("tower walk produced non-increasing jumps at step " +
                          std::to_string(i + 1));
    Int order = pow_ui(p, (spec.r - lo.r) + static_cast<unsigned long>(total_s - sum_of(lo.s)));
    f.levels.push_back({t, cls.family, cls.display_k, FieldLabel{hi.r, hi.s}, lo, order});
    prev = t;
  }

  return scale_tame(std::move(f), tame_multiplier(spec));
}

}  // namespace ramfiltre
