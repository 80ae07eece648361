#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "ramfiltre/filtration.hpp"

using namespace ramfiltre;

static RadicalSpec spec_of(long p, unsigned r, std::vector<unsigned> s, VClass vc) {
  RadicalSpec spec;
  spec.p = Prime(Int(p));
  spec.r = r;
  spec.s = std::move(s);
  spec.vclass = vc;
  return spec;
}

static FieldLabel lab(unsigned r, std::vector<unsigned> s) {
  return FieldLabel{r, std::move(s)};
}

TEST_CASE("tower walk, divisible class") {
  auto seq = tower_sequence(spec_of(3, 4, {1, 2, 3}, VClass::Divisible));
  const std::vector<FieldLabel> want = {
      lab(1, {0, 0, 0}), lab(1, {1, 1, 1}), lab(2, {1, 1, 1}), lab(2, {1, 2, 2}),
      lab(3, {1, 2, 2}), lab(3, {1, 2, 3}), lab(4, {1, 2, 3}),
  };
  CHECK(seq == want);
}

TEST_CASE("tower walk, nondivisible class") {
  auto seq = tower_sequence(spec_of(3, 4, {1, 2, 3}, VClass::NonDivisible));
  const std::vector<FieldLabel> want = {
      lab(1, {0, 0, 0}), lab(1, {1, 1, 0}), lab(2, {1, 1, 0}), lab(2, {1, 2, 1}),
      lab(3, {1, 2, 1}), lab(3, {1, 2, 2}), lab(4, {1, 2, 2}), lab(4, {1, 2, 3}),
  };
  CHECK(seq == want);
}

TEST_CASE("tower walk, single wild step") {
  for (VClass vc : {VClass::Divisible, VClass::NonDivisible}) {
    auto seq = tower_sequence(spec_of(3, 1, {1}, vc));
    CHECK(seq == std::vector<FieldLabel>{lab(1, {0}), lab(1, {1})});
  }
}

TEST_CASE("tower walk with a stalled last radical") {
  // s_n < s_{n-1}: the walk holds the last coordinate while the middle one
  // catches up.
  auto seq = tower_sequence(spec_of(3, 5, {1, 5, 2}, VClass::NonDivisible));
  REQUIRE(seq.size() >= 2);
  CHECK(seq.front() == lab(1, {0, 0, 0}));
  CHECK(seq.back() == lab(5, {1, 5, 2}));
  for (std::size_t i = 1; i < seq.size(); ++i) {
    const FieldLabel& lo = seq[i - 1];
    const FieldLabel& hi = seq[i];
    CHECK(hi.r >= lo.r);
    for (std::size_t j = 0; j < hi.s.size(); ++j) CHECK(hi.s[j] >= lo.s[j]);
    CHECK(label_degree(Int(3), hi) > label_degree(Int(3), lo));
  }
}

static std::vector<std::pair<std::string, std::string>> tagged(
    const std::vector<FamilyQuery>& fam) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fam) out.emplace_back(f.family, label_str(f.query));
  return out;
}

TEST_CASE("family enumeration, divisible class") {
  auto fam = enumerate_jump_families(spec_of(3, 4, {1, 2, 3}, VClass::Divisible));
  REQUIRE(fam.size() == 6);
  auto got = tagged(fam);
  std::sort(got.begin(), got.end());
  const std::vector<std::pair<std::string, std::string>> want = {
      {"i", "L_{4,(1,2,3)}"},
      {"ii", "L_{2,(1,1,1)}"},
      {"ii", "L_{3,(1,2,2)}"},
      {"iii", "L_{1,(1,1,1)}"},
      {"iii", "L_{2,(1,2,2)}"},
      {"iii", "L_{3,(1,2,3)}"},
  };
  auto sorted_want = want;
  std::sort(sorted_want.begin(), sorted_want.end());
  CHECK(got == sorted_want);
  for (const auto& f : fam) CHECK(f.k == (f.family == "iii" ? 4 : 1));
}

TEST_CASE("family enumeration, nondivisible class") {
  auto fam = enumerate_jump_families(spec_of(3, 4, {1, 2, 3}, VClass::NonDivisible));
  REQUIRE(fam.size() == 7);
  auto got = tagged(fam);
  std::sort(got.begin(), got.end());
  const std::vector<std::pair<std::string, std::string>> want = {
      {"ii", "L_{2,(1,1,0)}"},
      {"ii", "L_{3,(1,2,1)}"},
      {"ii", "L_{4,(1,2,2)}"},
      {"iv", "L_{2,(1,2,1)}"},
      {"iv", "L_{3,(1,2,2)}"},
      {"iv", "L_{4,(1,2,3)}"},
      {"seed", "L_{1,(1,1,0)}"},
  };
  CHECK(got == want);
  for (const auto& f : fam) {
    if (f.family == "ii") CHECK(f.k == 1);
    if (f.family == "iv") CHECK(f.k == 4);
    if (f.family == "seed") {
      // displayed with the top index, evaluated one lower (its last
      // coordinate is still zero)
      CHECK(f.k == 4);
      CHECK(f.jq.k == 3);
    }
  }
}

TEST_CASE("family enumeration boundary cases") {
  // i is nonempty only when the cyclotomic level exceeds every radical
  // exponent (divisible) or equals the last one (nondivisible).
  auto fam = enumerate_jump_families(spec_of(3, 2, {2}, VClass::Divisible));
  auto got = tagged(fam);
  std::sort(got.begin(), got.end());
  const std::vector<std::pair<std::string, std::string>> want = {
      {"ii", "L_{2,(1)}"},
      {"iii", "L_{1,(1)}"},
      {"iii", "L_{2,(2)}"},
  };
  CHECK(got == want);

  auto nd = enumerate_jump_families(spec_of(3, 1, {1, 1}, VClass::NonDivisible));
  REQUIRE(nd.size() == 2);
  CHECK(nd[0].family == "seed");
  CHECK(nd[0].query == lab(1, {1, 0}));
  CHECK(nd[1].family == "i");
  CHECK(nd[1].query == lab(1, {1, 1}));

  // the stalled regime populates family iii at levels s_n+2 .. s_{n-1}
  auto stalled = enumerate_jump_families(spec_of(3, 5, {1, 5, 2}, VClass::NonDivisible));
  std::vector<FieldLabel> threes;
  for (const auto& f : stalled)
    if (f.family == "iii") {
      threes.push_back(f.query);
      CHECK(f.k == 3);
    }
  CHECK(threes == std::vector<FieldLabel>{lab(4, {1, 4, 2}), lab(5, {1, 5, 2})});
}

TEST_CASE("filtration of a two-jump tower") {
  JumpEngine eng{Int(3)};
  Filtration f = build_filtration(spec_of(3, 2, {1}, VClass::Divisible), eng);
  CHECK(f.g0_order == 18);
  CHECK(f.g1_order == 9);
  REQUIRE(f.levels.size() == 3);
  CHECK(f.levels[0].jump == 0);
  CHECK(f.levels[0].family == "zero");
  CHECK(f.levels[0].group_order == 18);
  CHECK(f.levels[1].jump == 1);
  CHECK(f.levels[1].fixed_field == lab(1, {0}));
  CHECK(f.levels[1].group_order == 9);
  CHECK(f.levels[2].jump == 4);
  CHECK(f.levels[2].fixed_field == lab(1, {1}));
  CHECK(f.levels[2].group_order == 3);
}

TEST_CASE("filtration of single wild steps") {
  JumpEngine eng{Int(3)};
  Filtration nd = build_filtration(spec_of(3, 1, {1}, VClass::NonDivisible), eng);
  REQUIRE(nd.levels.size() == 2);
  CHECK(nd.levels[0].group_order == 6);
  CHECK(nd.levels[1].jump == 3);
  CHECK(nd.levels[1].group_order == 3);

  Filtration dv = build_filtration(spec_of(3, 1, {1}, VClass::Divisible), eng);
  REQUIRE(dv.levels.size() == 2);
  CHECK(dv.levels[1].jump == 1);
}

TEST_CASE("full filtration of the divisible showcase tower") {
  JumpEngine eng{Int(3)};
  Filtration f = build_filtration(spec_of(3, 4, {1, 2, 3}, VClass::Divisible), eng);
  REQUIRE(f.levels.size() == 7);

  std::vector<long> jumps, orders;
  std::vector<std::string> fams;
  std::vector<int> ks;
  for (const auto& lv : f.levels) {
    jumps.push_back(lv.jump.get_si());
    orders.push_back(lv.group_order.get_si());
    fams.push_back(lv.family);
    ks.push_back(lv.k);
  }
  CHECK(jumps == std::vector<long>{0, 1, 28, 109, 838, 3025, 9586});
  CHECK(orders == std::vector<long>{39366, 19683, 729, 243, 27, 9, 3});
  CHECK(fams == std::vector<std::string>{"zero", "iii", "ii", "iii", "ii", "iii", "i"});
  CHECK(ks == std::vector<int>{0, 4, 1, 4, 1, 4, 1});

  CHECK(f.levels[1].query == lab(1, {1, 1, 1}));
  CHECK(f.levels[2].query == lab(2, {1, 1, 1}));
  CHECK(f.levels[3].query == lab(2, {1, 2, 2}));
  CHECK(f.levels[4].query == lab(3, {1, 2, 2}));
  CHECK(f.levels[5].query == lab(3, {1, 2, 3}));
  CHECK(f.levels[6].query == lab(4, {1, 2, 3}));

  // fixed fields are the previous tower nodes
  CHECK(f.levels[1].fixed_field == lab(1, {0, 0, 0}));
  CHECK(f.levels[2].fixed_field == lab(1, {1, 1, 1}));
  CHECK(f.levels[6].fixed_field == lab(3, {1, 2, 3}));
}

TEST_CASE("full filtration of the nondivisible showcase tower") {
  JumpEngine eng{Int(3)};
  Filtration f = build_filtration(spec_of(3, 4, {1, 2, 3}, VClass::NonDivisible), eng);
  REQUIRE(f.levels.size() == 8);

  std::vector<long> jumps, orders;
  std::vector<std::string> fams;
  for (const auto& lv : f.levels) {
    jumps.push_back(lv.jump.get_si());
    orders.push_back(lv.group_order.get_si());
    fams.push_back(lv.family);
  }
  CHECK(jumps == std::vector<long>{0, 1, 10, 37, 280, 1009, 3196, 9757});
  CHECK(orders == std::vector<long>{39366, 19683, 2187, 729, 81, 27, 9, 3});
  CHECK(fams == std::vector<std::string>{"zero", "seed", "ii", "iv", "ii", "iv", "ii", "iv"});

  CHECK(f.levels[1].query == lab(1, {1, 1, 0}));
  CHECK(f.levels[1].k == 4);
  CHECK(f.levels[7].query == lab(4, {1, 2, 3}));
  CHECK(f.levels[7].fixed_field == lab(4, {1, 2, 2}));
}

TEST_CASE("order ratios telescope along the tower") {
  JumpEngine eng{Int(3)};
  for (VClass vc : {VClass::Divisible, VClass::NonDivisible}) {
    Filtration f = build_filtration(spec_of(3, 4, {1, 2, 3}, vc), eng);
    auto seq = tower_sequence(f.spec);
    REQUIRE(f.levels.size() == seq.size());
    // level j fixes node j-1, so consecutive orders divide by the degree of
    // the tower step below
    CHECK(f.levels[0].group_order / f.levels[1].group_order == 2);
    for (std::size_t j = 2; j < f.levels.size(); ++j) {
      Int step = label_degree(Int(3), seq[j - 1]) / label_degree(Int(3), seq[j - 2]);
      CHECK(f.levels[j - 1].group_order % f.levels[j].group_order == 0);
      CHECK(f.levels[j - 1].group_order / f.levels[j].group_order == step);
    }
  }
}

TEST_CASE("tame scaling multiplies jumps and the tame head") {
  JumpEngine eng{Int(3)};
  RadicalSpec spec = spec_of(3, 2, {1}, VClass::Divisible);
  spec.tame = {{Int(5), {1}}};
  Filtration f = build_filtration(spec, eng);
  CHECK(f.tame_multiplier == 5);
  CHECK(f.g0_order == 90);
  CHECK(f.g1_order == 9);
  REQUIRE(f.levels.size() == 3);
  CHECK(f.levels[0].group_order == 90);
  CHECK(f.levels[1].jump == 5);
  CHECK(f.levels[1].group_order == 9);
  CHECK(f.levels[2].jump == 20);
  CHECK(f.levels[2].group_order == 3);

  RadicalSpec nd = spec_of(3, 1, {1}, VClass::NonDivisible);
  nd.tame = {{Int(2), {1}}, {Int(7), {1}}};
  Filtration g = build_filtration(nd, eng);
  CHECK(g.tame_multiplier == 14);
  CHECK(g.levels[1].jump == 42);
  CHECK(g.g0_order == 84);

  // scaling by hand agrees and keeps labels
  Filtration base = build_filtration(spec_of(3, 2, {1}, VClass::Divisible), eng);
  Filtration scaled = scale_tame(base, Int(5));
  REQUIRE(scaled.levels.size() == f.levels.size());
  for (std::size_t i = 0; i < scaled.levels.size(); ++i) {
    CHECK(scaled.levels[i].jump == f.levels[i].jump);
    CHECK(scaled.levels[i].group_order == f.levels[i].group_order);
    CHECK(scaled.levels[i].fixed_field == base.levels[i].fixed_field);
  }
}

TEST_CASE("colliding jumps are a hard error, not merged") {
  // at p = 2 the first radical and first cyclotomic jumps of this tower
  // genuinely coincide; the strict-ordering contract must refuse it
  JumpEngine eng{Int(2)};
  RadicalSpec spec = spec_of(2, 2, {1}, VClass::Divisible);
  spec.p2_asserted = true;
  CHECK_THROWS_AS(build_filtration(spec, eng), OrderingError);
}

TEST_CASE("family values match tower jumps as multisets") {
  JumpEngine eng{Int(3)};
  for (VClass vc : {VClass::Divisible, VClass::NonDivisible}) {
    RadicalSpec spec = spec_of(3, 4, {1, 2, 3}, vc);
    Filtration f = build_filtration(spec, eng);
    std::vector<Int> walk;
    for (std::size_t i = 1; i < f.levels.size(); ++i) walk.push_back(f.levels[i].jump);
    std::vector<Int> fam;
    for (const auto& fq : enumerate_jump_families(spec)) fam.push_back(eng.jump(fq.jq));
    std::sort(walk.begin(), walk.end());
    std::sort(fam.begin(), fam.end());
    CHECK(walk == fam);
  }
}
