#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "ramfiltre/bigint.hpp"
#include "ramfiltre/errors.hpp"
#include "ramfiltre/model.hpp"
#include "ramfiltre/mutate.hpp"
#include "ramfiltre/n1.hpp"

namespace ramfiltre {

// One-step relative extension of the tower L_{r,s}: index k = 1 names the
// cyclotomic step L_{r,s}/L_{r-1,s}, index k in [2, n+1] the radical step
// L_{r,s}/L_{r,s-e_{k-1}}.  Each such step has a unique ramification jump;
// the engine computes it two independent ways.
struct JumpQuery {
  unsigned r = 1;
  std::vector<unsigned> s;  // zero entries allowed (radical not yet adjoined)
  int k = 1;                // 1..n+1
  VClass vclass = VClass::Divisible;
};

// tau_m(l): the index-2 jump of the uniform tower with m radical
// coordinates all equal to l, except that the last coordinate is clamped to
// min(l, s_last).  This is the building block of the closed forms.
struct TauQuery {
  int m = 1;
  unsigned l = 1;
  unsigned s_last = 0;
  unsigned r = 1;
  VClass vclass = VClass::Divisible;
};

// Which inner weight the general k >= 2 closed form uses.  `direct` is the
// weight p^{T-l} consistent with unrolling the one-step recurrence (and the
// one the recurrence path confirms); `shifted` inserts an extra -1 in the
// exponent and exists as a deliberately wrong negative control -- it even
// produces a fractional term when T = 1.
enum class TailWeight { direct, shifted };

namespace detail {

// Canonical normal form of a recurrence-path query.  tgt = 0 encodes k = 1;
// otherwise tgt is the 1-based coordinate the step belongs to (k - 1).
struct Canon {
  unsigned r = 1;
  std::vector<unsigned> s;
  int tgt = 0;
  VClass vc = VClass::Divisible;

  friend bool operator<(const Canon& a, const Canon& b) {
    return std::tie(a.r, a.s, a.tgt, a.vc) < std::tie(b.r, b.s, b.tgt, b.vc);
  }
};

}  // namespace detail

class JumpEngine {
 public:
  explicit JumpEngine(Int p, bool memoize = true) : p_(std::move(p)), use_memo_(memoize) {
    if (p_ < 2 || mpz_probab_prime_p(p_.get_mpz_t(), 40) == 0)
      throw DomainError("engine prime is not prime");
  }

  const Int& prime() const { return p_; }

  // ---------------------------------------------------------------------
  // Path B: total rewrite/recurrence evaluator.
  //
  // The query is first normalised (zero coordinates dropped with a class
  // flip when the distinguished last one vanishes, divisible block sorted,
  // every value-preserving clamp applied), then ground down by the two
  // linear pair recurrences until only single-radical towers and pure
  // cyclotomic steps remain.  k = 1 queries descend through the
  // two-route different computation across an (r, s_n) square.
  // ---------------------------------------------------------------------
  Int t_nk_rec(const JumpQuery& q) const {
    validate_query(q);
    return memo_eval(normalize(q.r, q.s, q.k == 1 ? 0 : q.k - 1, q.vclass));
  }

  // ---------------------------------------------------------------------
  // Path A: closed forms, k >= 2.  Total for every query whose spec
  // satisfies r >= max(s); throws DomainError outside the windows of the
  // uniform building blocks.
  // ---------------------------------------------------------------------
  Int t_nk_closed(const JumpQuery& q, TailWeight w = TailWeight::direct) const {
    validate_query(q);
    if (q.k == 1) throw DomainError("t_nk_closed covers k >= 2; use t_n1 for k = 1");
    detail::Canon c = light_canon(q.r, q.s, q.k - 1, q.vclass);
    const int n = static_cast<int>(c.s.size());
    const int j = c.tgt;  // 1-based target coordinate
    if (n == 1) return t1({p_, c.r, c.s[0], 2, c.vc});

    const unsigned sj = c.s[j - 1];
    std::vector<unsigned> T(n);
    for (int i = 0; i < n; ++i) T[i] = std::min(c.s[i], sj);
    const unsigned s_last = T[n - 1];
    const bool shifted =
        w == TailWeight::shifted || active_mutation() == MutationSite::closed_tail_shift;

    unsigned long e_main = 0;
    for (int i = 0; i < j - 1; ++i) e_main += T[i];
    Rat total = Rat(pow_ui(p_, mutated_exp(MutationSite::closed_main_pow, e_main))) *
                Rat(tau({n - j + 1, sj, s_last, c.r, c.vc}));

    Rat acc = 0;
    unsigned long prefix = 0;
    for (int mm = 0; mm <= j - 2; ++mm) {
      const unsigned Tm1 = T[mm];
      Rat inner = 0;
      for (unsigned l = 1; l <= Tm1; ++l) {
        long e = static_cast<long>(Tm1) - static_cast<long>(l) - (shifted ? 1 : 0);
        inner += pow_si(p_, e) * Rat(tau({n - mm, l, s_last, c.r, c.vc}));
      }
      acc += Rat(pow_ui(p_, prefix)) * inner;
      prefix += Tm1;
    }
    total += Rat(Int(1) - p_) * acc;
    return to_integer(total, "t_nk_closed");
  }

  // Path A, k = 1.  Valid on the window r >= s_n + 1 (divisible) resp.
  // r >= max(s_{n-1}, s_n) + 2 (nondivisible); DomainError outside, so the
  // caller can fall back to the recurrence path.
  Int t_n1(const JumpQuery& q) const {
    validate_query(q);
    if (q.k != 1) throw DomainError("t_n1 covers k = 1 only");
    detail::Canon c = light_canon(q.r, q.s, 0, q.vclass);
    const int n = static_cast<int>(c.s.size());
    if (n == 0) return cyclotomic_jump(p_, c.r);
    if (n == 1) return t1({p_, c.r, c.s[0], 1, c.vc});
    const unsigned sn = c.s[n - 1];
    if (c.vc == VClass::Divisible) {
      if (c.r < sn + 1) throw DomainError("k = 1 closed form needs r >= s_n + 1");
    } else {
      if (c.r < std::max(c.s[n - 2], sn) + 2)
        throw DomainError("k = 1 closed form needs r >= max(s_{n-1}, s_n) + 2");
    }
    unsigned long e_main = 0;
    for (int i = 0; i < n - 1; ++i) e_main += c.s[i];
    Int total = pow_ui(p_, mutated_exp(MutationSite::t_n1_main_pow, e_main)) *
                t1({p_, c.r, sn, 1, c.vc});
    Int acc = 0;
    unsigned long prefix = 0;
    for (int mm = 0; mm <= n - 2; ++mm) {
      const unsigned smm = c.s[mm];
      Int inner = 0;
      for (unsigned l = 1; l <= smm; ++l)
        inner += pow_ui(p_, smm - l) * tau({n - mm, l, sn, c.r, c.vc});
      acc += pow_ui(p_, prefix) * inner;
      prefix += smm;
    }
    return total + (Int(1) - p_) * acc;
  }

  // Closed form where available, recurrence path otherwise.
  Int jump(const JumpQuery& q) const {
    try {
      return q.k == 1 ? t_n1(q) : t_nk_closed(q);
    } catch (const DomainError&) {
      return t_nk_rec(q);
    }
  }

  Int tau(const TauQuery& t) const {
    if (t.m < 1) throw DomainError("tau needs m >= 1");
    if (t.l < 1) throw DomainError("tau needs l >= 1");
    const unsigned c = std::min(t.l, t.s_last);
    if (t.m == 1) {
      if (c == 0) throw DomainError("tau with one coordinate needs a nonzero clamp");
      return t1({p_, t.r, c, 2, t.vclass});
    }
    if (t.vclass == VClass::Divisible) {
      // In the divisible class the trailing coordinate is never the smallest,
      // so the clamp cannot bind.
      if (c < t.l) throw DomainError("divisible tau does not take a binding clamp");
      return uniform_t2(t.m, t.l, t.r);
    }
    if (c == t.l) {
      if (t.l == 1) return Int(1);
      return uniform_tnn1(t.m, t.l - 1, t.r);
    }
    // Binding clamp: last coordinate sits at c <= l-1.
    Int out = pow_ui(p_, mutated_exp(MutationSite::tau_prefix_pow, c)) *
              uniform_t2(t.m - 1, t.l, t.r);
    Int sum = 0;
    for (unsigned jj = 1; jj <= c; ++jj) sum += pow_ui(p_, c - jj) * uniform_tnn1(t.m, jj, t.r);
    return out + (Int(1) - p_) * sum;
  }

  // Index-2 jump of the fully uniform divisible tower (n coordinates all
  // equal to s): 1 + 2(p-1)p^n (p^{(n+1)(s-1)} - 1) / (p^{n+1} - 1).
  Int uniform_t2(int n, unsigned s, unsigned r) const {
    if (n < 1) throw DomainError("uniform_t2 needs n >= 1");
    if (s < 1 || r < s) throw DomainError("uniform_t2 needs r >= s >= 1");
    Int num = mutated(MutationSite::uniform_t2_coeff, 2) * (p_ - 1) * pow_ui(p_, n) *
              (pow_ui(p_, static_cast<unsigned long>(n + 1) * (s - 1)) - 1);
    return 1 + exact_div(num, pow_ui(p_, n + 1) - 1, "uniform_t2");
  }

  // Index-(n+1) jump of the uniform nondivisible tower:
  // 1 + 2p^{n-1}(p-1) (p^{(n+1)s} - 1) / (p^{n+1} - 1), for r >= s + 1.
  Int uniform_tnn1(int n, unsigned s, unsigned r) const {
    if (n < 1) throw DomainError("uniform_tnn1 needs n >= 1");
    if (r < s + 1) throw DomainError("uniform_tnn1 needs r >= s + 1");
    Int num = mutated(MutationSite::uniform_tnn1_coeff, 2) * pow_ui(p_, n - 1) * (p_ - 1) *
              (pow_ui(p_, static_cast<unsigned long>(n + 1) * s) - 1);
    return 1 + exact_div(num, pow_ui(p_, n + 1) - 1, "uniform_tnn1");
  }

  void clear_cache() const {
    std::lock_guard<std::mutex> lock(mu_);
    memo_.clear();
  }

 private:
  static void validate_query(const JumpQuery& q) {
    const int n = static_cast<int>(q.s.size());
    if (q.r < 1) throw DomainError("r < 1");
    if (q.k < 1 || q.k > n + 1) throw DomainError("k out of range 1..n+1");
    if (q.k >= 2 && q.s[q.k - 2] < 1)
      throw DomainError("radical-step jump needs s_{k-1} >= 1");
    if (q.k == 1 && q.r < 2) throw DomainError("k = 1 requires r >= 2");
  }

  // Zero-coordinate drop + divisible-block sort only; shared by both paths.
  // Dropping the distinguished last coordinate of a nondivisible tower
  // removes the only radicand with p-free valuation, so the class flips.
  static detail::Canon light_canon(unsigned r, std::vector<unsigned> s, int tgt, VClass vc) {
    for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i) {
      if (s[i] != 0) continue;
      if (tgt == i + 1) throw InternalError("target coordinate is zero after validation");
      const bool was_last = (i + 1 == static_cast<int>(s.size()));
      s.erase(s.begin() + i);
      if (was_last && vc == VClass::NonDivisible) vc = VClass::Divisible;
      if (tgt > i + 1) --tgt;
    }
    sort_divisible_block(s, tgt, vc);
    return {r, std::move(s), tgt, vc};
  }

  static void sort_divisible_block(std::vector<unsigned>& s, int& tgt, VClass vc) {
    const int n = static_cast<int>(s.size());
    const int m = (vc == VClass::NonDivisible) ? n - 1 : n;
    if (m <= 1) return;
    std::vector<std::pair<unsigned, int>> block(m);
    for (int i = 0; i < m; ++i) block[i] = {s[i], tgt == i + 1 ? 1 : 0};
    std::stable_sort(block.begin(), block.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (int i = 0; i < m; ++i) {
      s[i] = block[i].first;
      if (block[i].second) tgt = i + 1;
    }
  }

  // Full normal form for the recurrence path: light canonicalisation plus
  // every value-preserving reduction --
  //   * other coordinates clamp to the target's value,
  //   * in the nondivisible class with a divisible target the distinguished
  //     last coordinate cuts to target-1,
  //   * a non-target divisible coordinate equal to a divisible target's
  //     value drops by one (uniqueness of the multi-increment step's jump),
  // iterated to a fixed point.
  static detail::Canon normalize(unsigned r, std::vector<unsigned> s, int tgt, VClass vc) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i) {
        if (s[i] != 0) continue;
        if (tgt == i + 1) throw InternalError("target coordinate became zero");
        const bool was_last = (i + 1 == static_cast<int>(s.size()));
        s.erase(s.begin() + i);
        if (was_last && vc == VClass::NonDivisible) vc = VClass::Divisible;
        if (tgt > i + 1) --tgt;
        changed = true;
      }
      if (s.empty()) break;
      const int n = static_cast<int>(s.size());
      {
        std::vector<unsigned> before = s;
        int tgt_before = tgt;
        sort_divisible_block(s, tgt, vc);
        if (s != before || tgt != tgt_before) changed = true;
      }
      if (tgt >= 1) {
        const unsigned st = s[tgt - 1];
        for (int i = 0; i < n; ++i) {
          if (i == tgt - 1 || s[i] <= st) continue;
          s[i] = st;
          changed = true;
        }
        if (vc == VClass::NonDivisible && tgt != n && s[n - 1] >= st) {
          s[n - 1] = st - 1;
          changed = true;
        }
        if (vc == VClass::Divisible || tgt != n) {
          const int m = (vc == VClass::NonDivisible) ? n - 1 : n;
          for (int i = 0; i < m; ++i) {
            if (i == tgt - 1 || s[i] != st) continue;
            s[i] -= 1;
            changed = true;
          }
        }
      }
    }
    return {r, std::move(s), tgt, vc};
  }

  Int sub(unsigned r, std::vector<unsigned> s, int tgt, VClass vc) const {
    return memo_eval(normalize(r, std::move(s), tgt, vc));
  }

  Int memo_eval(const detail::Canon& c) const {
    if (use_memo_) {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memo_.find(c);
      if (it != memo_.end()) return it->second;
    }
    Int v = eval_rec(c);
    if (use_memo_) {
      std::lock_guard<std::mutex> lock(mu_);
      memo_.emplace(c, v);
    }
    return v;
  }

  Int eval_rec(const detail::Canon& c) const {
    if (c.s.empty()) {
      if (c.tgt != 0) throw InternalError("coordinate target with empty vector");
      return cyclotomic_jump(p_, c.r);
    }
    const int n = static_cast<int>(c.s.size());

    if (c.tgt == 0) {
      if (c.r < 2) throw DomainError("k = 1 requires r >= 2");
      // Two-route different computation across the square spanned by the
      // cyclotomic step and the last radical step:
      //   t_{n,1}(r,s) - t_{n,n+1}(r,s) = p (t_{n,1}(r, s-e_n) - t_{n,n+1}(r-1, s)).
      std::vector<unsigned> s2 = c.s;
      s2[n - 1] -= 1;
      Int a = sub(c.r, c.s, n, c.vc);
      Int b = sub(c.r, std::move(s2), 0, c.vc);
      Int d = sub(c.r - 1, c.s, n, c.vc);
      return a + p_ * (b - d);
    }

    if (n == 1) return t1({p_, c.r, c.s[0], 2, c.vc});

    const int j = c.tgt;
    const bool nd = c.vc == VClass::NonDivisible;

    if (!nd || j != n) {
      // Target lies in the divisible block.  In normal form every other
      // divisible coordinate sits strictly between 0 and the target value,
      // so the divisible-pair recurrence applies: lowering such a
      // coordinate a costs a cross term with the index moved onto a.
      const int m = nd ? n - 1 : n;
      int a = -1;
      for (int i = 0; i < m; ++i) {
        if (i == j - 1) continue;
        a = i;
        break;
      }
      if (a >= 0) {
        std::vector<unsigned> s2 = c.s;
        s2[a] -= 1;
        Int x = sub(c.r, c.s, a + 1, c.vc);
        Int y = sub(c.r, std::move(s2), j, c.vc);
        return (Int(1) - p_) * x + p_ * y;
      }
      // Nondivisible with nothing left but the target and the distinguished
      // last coordinate (strictly below the target in normal form): lower
      // the last coordinate via the mixed-pair recurrence.
      if (!nd || n != 2)
        throw UnreachableError("no rule applies to a divisible-target state");
      std::vector<unsigned> s2 = c.s;
      s2[1] -= 1;
      Int x = sub(c.r, std::move(s2), j, c.vc);
      Int y = sub(c.r, c.s, 2, c.vc);
      return p_ * x + (Int(1) - p_) * y;
    }

    // Nondivisible, target = the distinguished last coordinate: lower the
    // first earlier coordinate (all earlier ones sit in [1, s_n] here).
    std::vector<unsigned> s2 = c.s;
    s2[0] -= 1;
    Int x = sub(c.r, std::move(s2), n, c.vc);
    Int y = sub(c.r, c.s, 1, c.vc);
    return p_ * x + (Int(1) - p_) * y;
  }

  Int p_;
  bool use_memo_;
  mutable std::map<detail::Canon, Int> memo_;
  mutable std::mutex mu_;
};

}  // namespace ramfiltre
