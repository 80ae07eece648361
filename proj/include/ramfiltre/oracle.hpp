#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ramfiltre/bigint.hpp"
#include "ramfiltre/engine.hpp"
#include "ramfiltre/errors.hpp"
#include "ramfiltre/filtration.hpp"
#include "ramfiltre/herbrand.hpp"
#include "ramfiltre/model.hpp"
#include "ramfiltre/n1.hpp"

namespace ramfiltre {

struct GridSpec {
  std::vector<Int> primes{Int(3), Int(5)};
  int n_max = 3;
  unsigned r_max = 6;
  std::vector<VClass> vclasses{VClass::Divisible, VClass::NonDivisible};
  std::vector<Int> tame_degrees{Int(1), Int(5), Int(14)};
  bool assert_p2 = false;  // needed before p = 2 is allowed into `primes`
};

struct Failure {
  std::string check;
  std::string query;
  std::string expected;
  std::string got;
};

struct Report {
  long long checks_run = 0;
  std::vector<Failure> failures;

  void add_failure(std::string check, std::string query, std::string expected,
                   std::string got) {
    failures.push_back({std::move(check), std::move(query), std::move(expected),
                        std::move(got)});
  }
  void merge(Report&& other) {
    checks_run += other.checks_run;
    for (auto& f : other.failures) failures.push_back(std::move(f));
  }
  void sort_failures() {
    std::sort(failures.begin(), failures.end(), [](const Failure& a, const Failure& b) {
      return std::tie(a.check, a.query, a.expected, a.got) <
             std::tie(b.check, b.query, b.expected, b.got);
    });
  }
  bool ok() const { return failures.empty(); }
};

inline std::string query_str(const Int& p, const JumpQuery& q) {
  std::ostringstream os;
  os << "p=" << p << " t_{" << q.s.size() << "," << q.k << "}(" << q.r << ",(";
  for (std::size_t i = 0; i < q.s.size(); ++i) os << (i ? "," : "") << q.s[i];
  os << ")," << vclass_name(q.vclass) << ")";
  return os.str();
}

inline std::string spec_str(const RadicalSpec& spec) {
  std::ostringstream os;
  os << "p=" << spec.p.value << " L_{" << spec.r << ",(";
  for (std::size_t i = 0; i < spec.s.size(); ++i) os << (i ? "," : "") << spec.s[i];
  os << ")} " << vclass_name(spec.vclass);
  Int d = tame_multiplier(spec);
  if (d != 1) os << " tame=" << d;
  return os.str();
}

// Every valid exponent vector for the given class: n entries in [1, r_cap],
// nondecreasing everywhere (divisible) or on the first n-1 entries with the
// last one free (nondivisible).
inline void enumerate_vectors(int n, unsigned r_cap, VClass vc,
                              std::vector<std::vector<unsigned>>& out) {
  std::vector<unsigned> cur(n);
  const int sorted_len = vc == VClass::NonDivisible ? n - 1 : n;
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    unsigned lo = 1;
    if (i > 0 && i < sorted_len) lo = cur[i - 1];
    for (unsigned v = lo; v <= r_cap; ++v) {
      cur[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

inline std::vector<RadicalSpec> enumerate_grid(const GridSpec& g) {
  std::vector<RadicalSpec> out;
  for (const Int& p : g.primes) {
    Prime prime(p);
    if (prime.is_two() && !g.assert_p2) continue;
    for (VClass vc : g.vclasses) {
      for (int n = 1; n <= g.n_max; ++n) {
        for (unsigned r = 1; r <= g.r_max; ++r) {
          std::vector<std::vector<unsigned>> vecs;
          enumerate_vectors(n, r, vc, vecs);
          for (auto& s : vecs) {
            if (*std::max_element(s.begin(), s.end()) > r) continue;
            RadicalSpec spec{prime, r, s, vc, {}, prime.is_two()};
            validate(spec);
            out.push_back(std::move(spec));
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Independent n = 1 oracle.  The whole two-parameter table is forced by
//   * the level-one seeds t_{1,2}(1, b),
//   * the cyclotomic column t_{1,1}(a, 0),
//   * the two-route different computation across each (a, b) square,
//   * stability: the smaller of the two jumps of a square persists one step
//     further up its own direction.
// No closed form beyond the seeds enters.
// ---------------------------------------------------------------------------
struct N1Table {
  std::map<std::pair<unsigned, unsigned>, Int> t11;  // a >= 2, b >= 0
  std::map<std::pair<unsigned, unsigned>, Int> t12;  // a >= 1, b >= 1
};

inline N1Table n1_oracle_table(const Int& p, VClass vc, unsigned a_max, unsigned b_max) {
  N1Table t;
  for (unsigned b = 1; b <= b_max; ++b) t.t12[{1, b}] = t1_level1(p, b - 1, vc);
  for (unsigned a = 2; a <= a_max; ++a) t.t11[{a, 0}] = cyclotomic_jump(p, a);
  for (unsigned a = 2; a <= a_max; ++a) {
    for (unsigned b = 1; b <= b_max; ++b) {
      const Int& below = t.t11.at({a, b - 1});   // cyclotomic jump one floor down
      const Int& left = t.t12.at({a - 1, b});    // radical jump one column back
      Int delta = p * (below - left);
      if (delta > 0) {
        t.t12[{a, b}] = left;
        t.t11[{a, b}] = left + delta;
      } else if (delta < 0) {
        t.t11[{a, b}] = below;
        t.t12[{a, b}] = below - delta;
      } else {
        std::ostringstream os;
        os << "square at a=" << a << " b=" << b << " has equal jumps";
        throw ConsistencyError(os.str());
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Check families.  Each walks the grid and records mismatches; exceptions
// from a single query become failures, never aborts.
// ---------------------------------------------------------------------------

inline Report check_n1_table(const Int& p, VClass vc, unsigned a_max, unsigned b_max) {
  Report rep;
  N1Table table = n1_oracle_table(p, vc, a_max, b_max);
  auto compare = [&](unsigned a, unsigned b, int k, const Int& expected) {
    rep.checks_run += 1;
    Int got = t1({p, a, b, k, vc});
    if (got != expected) {
      std::ostringstream q;
      q << "p=" << p << " t_{1," << k << "}(" << a << "," << b << ")," << vclass_name(vc);
      rep.add_failure("n1-table", q.str(), expected.get_str(), got.get_str());
    }
  };
  for (auto& [ab, v] : table.t12) compare(ab.first, ab.second, 2, v);
  for (auto& [ab, v] : table.t11) compare(ab.first, ab.second, 1, v);
  return rep;
}

namespace detail {

template <class F>
void guarded(Report& rep, const std::string& check, const std::string& query, F&& body) {
  rep.checks_run += 1;
  try {
    std::forward<F>(body)();
  } catch (const Error& e) {
    rep.add_failure(check, query, "no exception", e.what());
  }
}

}  // namespace detail

// Path A (closed forms) against path B (recurrence) on every one-step query
// of a spec.  k = 1 queries outside the closed-form window must raise
// DomainError; in-window disagreement or an unexpected window miss fails.
inline Report check_path_equality(const RadicalSpec& spec, const JumpEngine& eng) {
  Report rep;
  const int n = static_cast<int>(spec.s.size());
  for (int k = 1; k <= n + 1; ++k) {
    JumpQuery q{spec.r, spec.s, k, spec.vclass};
    if (k == 1 && spec.r < 2) continue;
    const std::string qs = query_str(spec.p.value, q);
    rep.checks_run += 1;
    try {
      Int rec = eng.t_nk_rec(q);
      bool in_window = true;
      Int closed = 0;
      try {
        closed = k == 1 ? eng.t_n1(q) : eng.t_nk_closed(q);
      } catch (const DomainError& e) {
        in_window = false;
        if (k != 1) rep.add_failure("path-equality", qs, "closed form value", e.what());
        // k = 1 out-of-window: verify the window really is closed
        else {
          const unsigned sn = spec.s.back();
          const bool should_be_in =
              spec.vclass == VClass::Divisible
                  ? spec.r >= sn + 1
                  : spec.r >= std::max(n >= 2 ? spec.s[n - 2] : 0u, sn) + 2;
          if (should_be_in && n >= 2)
            rep.add_failure("path-equality", qs, "in-window evaluation", e.what());
        }
      }
      if (in_window && closed != rec)
        rep.add_failure("path-equality", qs, rec.get_str(), closed.get_str());
    } catch (const Error& e) {
      rep.add_failure("path-equality", qs, "recurrence value", e.what());
    }
  }
  return rep;
}

// The two-route different computation across every (l, k) square of
// one-step extensions: t_l - t_k = p (t_l' - t_k') where each prime drops
// the other index's floor.
inline Report check_square_identity(const RadicalSpec& spec, const JumpEngine& eng) {
  Report rep;
  const int n = static_cast<int>(spec.s.size());
  const Int& p = spec.p.value;
  for (int l = 1; l <= n; ++l) {
    if (l == 1 && spec.r < 2) continue;
    for (int k = l + 1; k <= n + 1; ++k) {
      JumpQuery ql{spec.r, spec.s, l, spec.vclass};
      JumpQuery qk{spec.r, spec.s, k, spec.vclass};
      // drop the k-coordinate for the l-route, and vice versa
      JumpQuery ql2 = ql;
      ql2.s[k - 2] -= 1;
      JumpQuery qk2 = qk;
      if (l == 1) qk2.r -= 1;
      else qk2.s[l - 2] -= 1;
      if (qk2.r < 1) continue;
      std::ostringstream q;
      q << spec_str(spec) << " square l=" << l << " k=" << k;
      detail::guarded(rep, "square-identity", q.str(), [&] {
        Int tl = eng.t_nk_rec(ql);
        Int tk = eng.t_nk_rec(qk);
        Int tl2 = eng.t_nk_rec(ql2);
        Int tk2 = eng.t_nk_rec(qk2);
        Int lhs = tl - tk;
        Int rhs = p * (tl2 - tk2);
        if (lhs != rhs)
          rep.add_failure("square-identity", q.str(), lhs.get_str(), rhs.get_str());
      });
    }
  }
  return rep;
}

// Filtration-level coherence: the walk and the direct family enumeration
// must produce the same jumps, orders must telescope with the step degrees,
// jumps must strictly increase (checked during the build), every tower node
// must satisfy different-transitivity, and the tame part must act by pure
// scaling.
inline Report check_filtration_consistency(const RadicalSpec& spec, const JumpEngine& eng,
                                           const std::vector<Int>& tame_degrees) {
  Report rep;
  const std::string sp = spec_str(spec);
  Filtration f;
  rep.checks_run += 1;
  try {
    f = build_filtration(spec, eng);
  } catch (const Error& e) {
    rep.add_failure("filtration-build", sp, "a filtration", e.what());
    return rep;
  }

  // family enumeration vs walk (multisets of jump values)
  detail::guarded(rep, "filtration-families", sp, [&] {
    auto fams = enumerate_jump_families(spec);
    std::vector<Int> fam_vals;
    for (const auto& fq : fams)
      fam_vals.push_back(eng.t_nk_rec(fq.jq) * f.tame_multiplier);
    std::vector<Int> walk_vals;
    for (std::size_t j = 1; j < f.levels.size(); ++j)
      walk_vals.push_back(f.levels[j].jump);
    std::sort(fam_vals.begin(), fam_vals.end());
    std::vector<Int> walk_sorted = walk_vals;
    std::sort(walk_sorted.begin(), walk_sorted.end());
    if (fam_vals != walk_sorted) {
      auto join = [](const std::vector<Int>& v) {
        std::string s;
        for (const Int& x : v) s += (s.empty() ? "" : ",") + x.get_str();
        return s;
      };
      rep.add_failure("filtration-families", sp, join(walk_sorted), join(fam_vals));
    }
  });

  // orders telescope with the walk's degree increments
  detail::guarded(rep, "filtration-orders", sp, [&] {
    const Int& p = spec.p.value;
    auto seq = tower_sequence(spec);
    const unsigned total = spec.r + sum_of(spec.s);
    for (std::size_t j = 1; j < f.levels.size(); ++j) {
      const FieldLabel& fixed = f.levels[j].fixed_field;
      Int want = pow_ui(p, total - fixed.r - sum_of(fixed.s));
      if (f.levels[j].group_order != want) {
        rep.add_failure("filtration-orders", sp + " level " + std::to_string(j),
                        want.get_str(), f.levels[j].group_order.get_str());
        return;
      }
    }
    if (f.levels.size() != seq.size())
      rep.add_failure("filtration-orders", sp, std::to_string(seq.size()) + " levels",
                      std::to_string(f.levels.size()) + " levels");
  });

  // different transitivity at every proper tower node
  for (std::size_t node = 0; node < tower_node_count(f); ++node) {
    std::string q = sp + " node " + std::to_string(node);
    detail::guarded(rep, "tower-different", q, [&] {
      if (!tower_different_check(f, node))
        rep.add_failure("tower-different", q, "transitive different", "mismatch");
    });
  }

  // tame scaling
  for (const Int& d : tame_degrees) {
    if (d == 1) continue;
    std::string q = sp + " tame*" + d.get_str();
    detail::guarded(rep, "tame-scaling", q, [&] {
      Filtration g = scale_tame(f, d);
      bool good = g.levels.size() == f.levels.size() &&
                  g.g0_order == f.g0_order * d && g.g1_order == f.g1_order;
      for (std::size_t j = 0; good && j < g.levels.size(); ++j) {
        const auto& a = f.levels[j];
        const auto& b = g.levels[j];
        if (a.jump == 0)
          good = b.jump == 0 && b.group_order == a.group_order * d;
        else
          good = b.jump == a.jump * d && b.group_order == a.group_order;
      }
      if (!good) rep.add_failure("tame-scaling", q, "scaled copy", "structure mismatch");
      // adding a tame factor of degree d on top multiplies the different by
      // d and contributes its own d-1 (transitivity with a tame step)
      if (good && different_valuation(g) != different_valuation(f) * d + (d - 1))
        rep.add_failure("tame-scaling", q, "linear different growth", "mismatch");
    });
  }

  return rep;
}

// Monotonicity along the two principal directions: the cyclotomic-step jump
// grows strictly with r, the last radical-step jump grows strictly with the
// final exponent.
inline Report check_monotonicity(const RadicalSpec& spec, const JumpEngine& eng) {
  Report rep;
  const int n = static_cast<int>(spec.s.size());
  const std::string sp = spec_str(spec);
  detail::guarded(rep, "monotone-r", sp, [&] {
    Int prev = 0;
    bool first = true;
    for (unsigned rr = 2; rr <= spec.r; ++rr) {
      Int v = eng.t_nk_rec({rr, spec.s, 1, spec.vclass});
      if (!first && v <= prev) {
        rep.add_failure("monotone-r", sp + " r=" + std::to_string(rr),
                        "> " + prev.get_str(), v.get_str());
        return;
      }
      prev = v;
      first = false;
    }
  });
  detail::guarded(rep, "monotone-s", sp, [&] {
    Int prev = 0;
    bool first = true;
    for (unsigned b = 1; b <= spec.s.back(); ++b) {
      std::vector<unsigned> s = spec.s;
      s[n - 1] = b;
      Int v = eng.t_nk_rec({spec.r, s, n + 1, spec.vclass});
      if (!first && v <= prev) {
        rep.add_failure("monotone-s", sp + " s_n=" + std::to_string(b),
                        "> " + prev.get_str(), v.get_str());
        return;
      }
      prev = v;
      first = false;
    }
  });
  return rep;
}

// ---------------------------------------------------------------------------
// Grid driver with optional parallel fan-out.  Engines are per-thread (the
// memo is idempotent, so redundant work is the only cost).
// ---------------------------------------------------------------------------
inline Report run_checks_on_specs(const std::vector<RadicalSpec>& specs,
                                  const std::vector<Int>& tame_degrees) {
  Report rep;
  std::map<std::string, JumpEngine> engines;
  for (const RadicalSpec& spec : specs) {
    auto [it, inserted] = engines.try_emplace(spec.p.value.get_str(), spec.p.value);
    (void)inserted;
    const JumpEngine& eng = it->second;
    rep.merge(check_path_equality(spec, eng));
    rep.merge(check_square_identity(spec, eng));
    rep.merge(check_filtration_consistency(spec, eng, tame_degrees));
    rep.merge(check_monotonicity(spec, eng));
  }
  return rep;
}

inline Report run_all_checks(const GridSpec& grid, int jobs = 1) {
  std::vector<RadicalSpec> specs = enumerate_grid(grid);
  Report rep;
  if (specs.empty()) return rep;  // nothing enumerated: report zero checks
  // the n = 1 closed-form table against the square-identity oracle
  for (const Int& p : grid.primes) {
    if (p == 2 && !grid.assert_p2) continue;
    for (VClass vc : grid.vclasses) {
      detail::guarded(rep, "n1-table", "p=" + p.get_str() + " " + vclass_name(vc), [&] {
        rep.merge(check_n1_table(p, vc, 6, 6));
      });
    }
  }
  if (jobs <= 1 || specs.size() < 2) {
    rep.merge(run_checks_on_specs(specs, grid.tame_degrees));
    rep.sort_failures();
    return rep;
  }
  const int workers = std::min<int>(jobs, static_cast<int>(specs.size()));
  std::vector<std::vector<RadicalSpec>> buckets(workers);
  for (std::size_t i = 0; i < specs.size(); ++i)
    buckets[i % workers].push_back(specs[i]);
  std::vector<std::future<Report>> futs;
  for (int w = 0; w < workers; ++w)
    futs.push_back(std::async(std::launch::async, [&, w] {
      return run_checks_on_specs(buckets[w], grid.tame_degrees);
    }));
  for (auto& fu : futs) rep.merge(fu.get());
  rep.sort_failures();
  return rep;
}

}  // namespace ramfiltre
