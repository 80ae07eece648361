#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ramfiltre/bigint.hpp"
#include "ramfiltre/errors.hpp"
#include "ramfiltre/filtration.hpp"

namespace ramfiltre {

// Lower-numbering filtration of a finite group, kept as the data needed for
// Herbrand transforms: |H_0|, the strictly increasing positive jumps, and
// |H_u| on each segment (jumps[j-1], jumps[j]].  Beyond the last jump the
// group is trivial.
struct GroupFiltration {
  Int order0 = 1;
  std::vector<Int> jumps;
  std::vector<Int> orders;
};

// Exact piecewise-linear function through the origin: slope slopes[i] on
// (breaks[i-1], breaks[i]], slope slopes.back() beyond the last break.
// Every Herbrand transform is the identity on [-1, 0], so non-positive
// inputs pass through unchanged.
struct PiecewiseLinear {
  std::vector<Rat> breaks;  // strictly increasing, all > 0
  std::vector<Rat> slopes;  // breaks.size() + 1 entries

  Rat value(const Rat& u) const {
    if (u <= 0) return u;
    Rat acc = 0;
    Rat prev = 0;
    for (std::size_t i = 0; i < breaks.size(); ++i) {
      if (u <= breaks[i]) return acc + slopes[i] * (u - prev);
      acc += slopes[i] * (breaks[i] - prev);
      prev = breaks[i];
    }
    return acc + slopes.back() * (u - prev);
  }
};

inline GroupFiltration full_group_filtration(const Filtration& f) {
  GroupFiltration g;
  g.order0 = f.g0_order;
  for (std::size_t j = 1; j < f.levels.size(); ++j) {
    g.jumps.push_back(f.levels[j].jump);
    g.orders.push_back(f.levels[j].group_order);
  }
  return g;
}

inline PiecewiseLinear phi_from_group(const GroupFiltration& g) {
  PiecewiseLinear phi;
  for (const Int& t : g.jumps) phi.breaks.emplace_back(t);
  for (const Int& o : g.orders) phi.slopes.push_back(Rat(o) / Rat(g.order0));
  phi.slopes.push_back(Rat(1) / Rat(g.order0));
  return phi;
}

inline PiecewiseLinear phi_from_filtration(const Filtration& f) {
  return phi_from_group(full_group_filtration(f));
}

// Exact inverse of an increasing piecewise-linear function through 0.
inline PiecewiseLinear invert(const PiecewiseLinear& phi) {
  PiecewiseLinear psi;
  for (const Rat& b : phi.breaks) psi.breaks.push_back(phi.value(b));
  for (const Rat& m : phi.slopes) {
    if (m <= 0) throw DomainError("cannot invert a non-increasing piecewise-linear map");
    psi.slopes.push_back(Rat(1) / m);
  }
  return psi;
}

inline PiecewiseLinear psi_from_filtration(const Filtration& f) {
  return invert(phi_from_filtration(f));
}

// Valuation of the different: sum over i >= 0 of (|H_i| - 1).
inline Int different_valuation(const GroupFiltration& g) {
  Int v = g.order0 - 1;
  Int prev = 0;
  for (std::size_t j = 0; j < g.jumps.size(); ++j) {
    v += (g.jumps[j] - prev) * (g.orders[j] - 1);
    prev = g.jumps[j];
  }
  return v;
}

inline Int different_valuation(const Filtration& f) {
  return different_valuation(full_group_filtration(f));
}

// Number of proper tower nodes (valid arguments to restrict_filtration and
// friends): the walk steps, the last of which fixes the deepest proper
// subfield.
inline std::size_t tower_node_count(const Filtration& f) { return f.levels.size() - 1; }

// Filtration of the subgroup fixing tower node `node` (0-based into the
// walk: node 0 is the first proper subfield above the base).  The fixed
// group of node j is exactly the filtration group at level j+1, so the
// induced filtration needs no Herbrand transform: H keeps its full order up
// to and including its own level's jump, then follows the higher levels.
inline GroupFiltration restrict_filtration(const Filtration& f, std::size_t node) {
  const std::size_t m = tower_node_count(f);
  if (node >= m) throw DomainError("tower node index out of range");
  GroupFiltration g;
  g.order0 = f.levels[node + 1].group_order;
  for (std::size_t j = node + 1; j <= m; ++j) {
    g.jumps.push_back(f.levels[j].jump);
    g.orders.push_back(j == node + 1 ? g.order0 : f.levels[j].group_order);
  }
  return g;
}

// Filtration of the quotient by the subgroup fixing the given tower node,
// i.e. of the Galois group of that node over the base: jumps transform
// through the subgroup's Herbrand function (integral by Herbrand's
// theorem; IntegralityError otherwise), orders divide by |H|.  The deepest
// segment comes out with order 1 and contributes nothing.
inline GroupFiltration quotient_filtration(const Filtration& f, std::size_t node) {
  const std::size_t m = tower_node_count(f);
  if (node >= m) throw DomainError("tower node index out of range");
  GroupFiltration sub = restrict_filtration(f, node);
  PiecewiseLinear phi_sub = phi_from_group(sub);
  const Int h = sub.order0;
  GroupFiltration q;
  q.order0 = exact_div(f.g0_order, h, "quotient order0");
  for (std::size_t j = 1; j <= node + 1; ++j) {
    q.jumps.push_back(
        to_integer(phi_sub.value(Rat(f.levels[j].jump)), "quotient filtration jump"));
    q.orders.push_back(exact_div(f.levels[j].group_order, h, "quotient order"));
  }
  return q;
}

// Transitivity of the different along the tower: for the intermediate field
// M fixed by H,
//   v_L(D_{L/F}) = v_L(D_{L/M}) + |H| * v_M(D_{M/F}).
inline bool tower_different_check(const Filtration& f, std::size_t node) {
  GroupFiltration sub = restrict_filtration(f, node);
  GroupFiltration quot = quotient_filtration(f, node);
  Int lhs = different_valuation(f);
  Int rhs = different_valuation(sub) + sub.order0 * different_valuation(quot);
  return lhs == rhs;
}

}  // namespace ramfiltre
