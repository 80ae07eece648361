#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ramfiltre/herbrand.hpp"

using namespace ramfiltre;

static Filtration two_jump_filtration() {
  RadicalSpec spec;
  spec.p = Prime(Int(3));
  spec.r = 2;
  spec.s = {1};
  spec.vclass = VClass::Divisible;
  static JumpEngine eng{Int(3)};
  return build_filtration(spec, eng);
}

static Filtration showcase(VClass vc) {
  RadicalSpec spec;
  spec.p = Prime(Int(3));
  spec.r = 4;
  spec.s = {1, 2, 3};
  spec.vclass = vc;
  static JumpEngine eng{Int(3)};
  return build_filtration(spec, eng);
}

TEST_CASE("group filtration extraction") {
  GroupFiltration g = full_group_filtration(two_jump_filtration());
  CHECK(g.order0 == 18);
  CHECK(g.jumps == std::vector<Int>{1, 4});
  CHECK(g.orders == std::vector<Int>{9, 3});
}

TEST_CASE("phi is the integral of the index function") {
  PiecewiseLinear phi = phi_from_filtration(two_jump_filtration());
  REQUIRE(phi.breaks.size() == 2);
  CHECK(phi.breaks[0] == Rat(1));
  CHECK(phi.breaks[1] == Rat(4));
  REQUIRE(phi.slopes.size() == 3);
  CHECK(phi.slopes[0] == Rat(1, 2));
  CHECK(phi.slopes[1] == Rat(1, 6));
  CHECK(phi.slopes[2] == Rat(1, 18));

  CHECK(phi.value(Rat(-5)) == Rat(-5));  // identity below zero
  CHECK(phi.value(Rat(0)) == 0);
  CHECK(phi.value(Rat(1)) == Rat(1, 2));
  CHECK(phi.value(Rat(2)) == Rat(2, 3));
  CHECK(phi.value(Rat(4)) == 1);
  CHECK(phi.value(Rat(22)) == 2);
  CHECK(phi.value(Rat(1, 2)) == Rat(1, 4));
}

TEST_CASE("psi inverts phi exactly") {
  for (const Filtration& f : {two_jump_filtration(), showcase(VClass::Divisible),
                              showcase(VClass::NonDivisible)}) {
    PiecewiseLinear phi = phi_from_filtration(f);
    PiecewiseLinear psi = psi_from_filtration(f);
    for (const Rat& b : phi.breaks) {
      CHECK(psi.value(phi.value(b)) == b);
      CHECK(phi.value(psi.value(phi.value(b))) == phi.value(b));
    }
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<long> num(0, 20000), den(1, 100);
    for (int i = 0; i < 200; ++i) {
      Rat u(num(rng), den(rng));
      u.canonicalize();
      CHECK(psi.value(phi.value(u)) == u);
      CHECK(phi.value(psi.value(u)) == u);
    }
    CHECK(psi.value(Rat(-7, 2)) == Rat(-7, 2));
  }
}

TEST_CASE("different valuation from the filtration") {
  // sum over i >= 0 of (|G_i| - 1)
  CHECK(different_valuation(two_jump_filtration()) == 31);

  GroupFiltration single;
  single.order0 = 3;
  single.jumps = {Int(4)};
  single.orders = {Int(3)};
  CHECK(different_valuation(single) == (4 + 1) * (3 - 1));
}

TEST_CASE("restriction to a tower subgroup") {
  Filtration f = two_jump_filtration();
  REQUIRE(tower_node_count(f) == 2);

  GroupFiltration h0 = restrict_filtration(f, 0);
  CHECK(h0.order0 == 9);
  CHECK(h0.jumps == std::vector<Int>{1, 4});
  CHECK(h0.orders == std::vector<Int>{9, 3});
  CHECK(different_valuation(h0) == 22);

  GroupFiltration h1 = restrict_filtration(f, 1);
  CHECK(h1.order0 == 3);
  CHECK(h1.jumps == std::vector<Int>{4});
  CHECK(h1.orders == std::vector<Int>{3});
  CHECK(different_valuation(h1) == 10);
}

TEST_CASE("quotient filtration in upper numbering of the subfield") {
  Filtration f = two_jump_filtration();

  GroupFiltration q0 = quotient_filtration(f, 0);
  CHECK(q0.order0 == 2);
  CHECK(different_valuation(q0) == 1);

  GroupFiltration q1 = quotient_filtration(f, 1);
  CHECK(q1.order0 == 6);
  CHECK(different_valuation(q1) == 7);

  // stripped of trailing trivial segments, the quotient at node 1 is the
  // filtration of the one-radical subtower
  while (!q1.orders.empty() && q1.orders.back() == 1) {
    q1.orders.pop_back();
    q1.jumps.pop_back();
  }
  RadicalSpec sub;
  sub.p = Prime(Int(3));
  sub.r = 1;
  sub.s = {1};
  sub.vclass = VClass::Divisible;
  JumpEngine eng{Int(3)};
  GroupFiltration direct = full_group_filtration(build_filtration(sub, eng));
  CHECK(q1.order0 == direct.order0);
  CHECK(q1.jumps == direct.jumps);
  CHECK(q1.orders == direct.orders);
}

TEST_CASE("different is transitive along the tower") {
  for (const Filtration& f : {two_jump_filtration(), showcase(VClass::Divisible),
                              showcase(VClass::NonDivisible)}) {
    for (std::size_t node = 0; node < tower_node_count(f); ++node) {
      INFO("node " << node);
      CHECK(tower_different_check(f, node));
    }
  }
}

TEST_CASE("tame scaling grows the different linearly") {
  Filtration f = two_jump_filtration();
  Int base = different_valuation(f);
  for (long d : {5L, 14L, 875L}) {
    Filtration scaled = scale_tame(f, Int(d));
    CHECK(different_valuation(scaled) == d * base + (d - 1));
  }
}

TEST_CASE("phi of the showcase towers stays exact") {
  Filtration f = showcase(VClass::NonDivisible);
  PiecewiseLinear phi = phi_from_filtration(f);
  REQUIRE(phi.breaks.size() == 7);
  // phi(1) = 1/2: index two up to the wild part
  CHECK(phi.value(Rat(1)) == Rat(1, 2));
  // slopes decrease and the last one is 1/|G_0|
  for (std::size_t i = 1; i < phi.slopes.size(); ++i)
    CHECK(phi.slopes[i] < phi.slopes[i - 1]);
  CHECK(phi.slopes.back() == Rat(Int(1), Int(39366)));
}
