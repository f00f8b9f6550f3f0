#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "wpwb/wpwb.hpp"

using namespace wpwb;
using namespace wpwb::testing;

namespace {
Rat rat(long n, long d) { return Rat(BigInt(n), BigInt(d)); }

std::shared_ptr<const OutcomeSpace> space2() {
  auto s = std::make_shared<OutcomeSpace>();
  s->vars = {"x"};
  s->outcomes = {{RealE(rat(1, 2))}, {RealE(Rat(1))}};
  return s;
}

std::shared_ptr<const OutcomeSpace> spaceN(int n) {
  auto s = std::make_shared<OutcomeSpace>();
  s->vars = {"x"};
  for (int i = 0; i < n; ++i) s->outcomes.push_back({RealE(Rat(i))});
  return s;
}

// nu{} = 0, nu{a} = 0.2, nu{b} = 0.3, nu{a,b} = 1.
Capacity example_capacity() {
  return Capacity::from_table(space2(),
                              {Rat(0), rat(1, 5), rat(3, 10), Rat(1)});
}
}  // namespace

TEST_CASE("classification of the worked example") {
  const CapacityFlags f = example_capacity().classify();
  CHECK(f.monotone);
  CHECK(f.convex);  // 1 + 0 >= 0.2 + 0.3 on the only nontrivial pair
  CHECK_FALSE(f.concave);
  CHECK(f.normalized);
}

TEST_CASE("probability capacities are additive: convex, concave, monotone") {
  const Capacity p = Capacity::probability(space2(), {rat(1, 2), rat(1, 2)});
  const CapacityFlags f = p.classify();
  CHECK(f.monotone);
  CHECK(f.convex);
  CHECK(f.concave);
  CHECK(f.normalized);
  const Capacity q = Capacity::probability(space2(), {rat(1, 3), rat(1, 3)});
  CHECK_FALSE(q.classify().normalized);
}

TEST_CASE("belief from a single joint mass: the unanimity capacity") {
  std::map<SubsetMask, Rat> m;
  m[0b11] = Rat(1);
  const Capacity b = Capacity::belief(space2(), m);
  CHECK(b.at(0b01) == Rat(0));
  CHECK(b.at(0b10) == Rat(0));
  CHECK(b.at(0b11) == Rat(1));
  const CapacityFlags f = b.classify();
  CHECK(f.monotone);
  CHECK(f.convex);
  CHECK_FALSE(f.concave);
}

TEST_CASE("capacity invariants are enforced") {
  CHECK_THROWS_AS(Capacity::from_table(space2(), {Rat(1), Rat(0), Rat(0), Rat(1)}), Error);
  CHECK_THROWS_AS(Capacity::from_table(space2(), {Rat(0), Rat(-1), Rat(0), Rat(1)}), Error);
  CHECK_THROWS_AS(Capacity::from_table(space2(), {Rat(0), Rat(1)}), Error);
  std::map<SubsetMask, Rat> bad;
  bad[0] = Rat(1);
  CHECK_THROWS_AS(Capacity::belief(space2(), bad), Error);
  CHECK_THROWS_AS(Capacity::probability(spaceN(21), std::vector<Rat>(21, Rat(0))),
                  SpaceTooLarge);
}

TEST_CASE("non-monotone capacities cannot be integrated") {
  const Capacity bad =
      Capacity::from_table(space2(), {Rat(0), Rat(1), rat(3, 10), rat(1, 2)});
  CHECK_FALSE(bad.classify().monotone);
  CHECK_THROWS_AS(choquet(std::vector<Rat>{Rat(1), Rat(2)}, bad), NonMonotoneCapacity);
}

TEST_CASE("choquet: indicator of a set integrates to its capacity") {
  const Capacity nu = example_capacity();
  CHECK(choquet(std::vector<Rat>{Rat(1), Rat(0)}, nu) == rat(1, 5));
  CHECK(choquet(std::vector<Rat>{Rat(0), Rat(1)}, nu) == rat(3, 10));
  CHECK(choquet(std::vector<Rat>{Rat(1), Rat(1)}, nu) == Rat(1));
  CHECK(choquet(std::vector<Rat>{Rat(0), Rat(0)}, nu) == Rat(0));
}

TEST_CASE("choquet: the worked 1.2 example and the additive collapse") {
  const Capacity nu = example_capacity();
  // f(a)=2, f(b)=1: (2-1)*nu{a} + (1-0)*nu{a,b} = 0.2 + 1.
  CHECK(choquet(std::vector<Rat>{Rat(2), Rat(1)}, nu) == rat(6, 5));
  const Capacity p = Capacity::probability(space2(), {rat(1, 2), rat(1, 2)});
  CHECK(choquet(std::vector<Rat>{Rat(2), Rat(1)}, p) == rat(3, 2));
}

TEST_CASE("choquet handles +inf levels under the 0 * inf convention") {
  const Capacity b = [] {
    std::map<SubsetMask, Rat> m;
    m[0b01] = Rat(1);  // all mass on outcome 1
    return Capacity::belief(space2(), m);
  }();
  // f = (3, inf): {f >= inf} = {2} has belief 0, so only finite levels count.
  CHECK(choquet(std::vector<ExtRat>{ExtRat(3), ExtRat::infinity()}, b) == ExtRat(3));
  const Capacity p = Capacity::probability(space2(), {rat(1, 2), rat(1, 2)});
  CHECK(choquet(std::vector<ExtRat>{ExtRat(3), ExtRat::infinity()}, p) ==
        ExtRat::infinity());
}

TEST_CASE("choquet agrees with the ascending-level oracle on random draws") {
  Rng rng(606);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    std::map<SubsetMask, Rat> masses;
    const int pieces = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < pieces; ++i) {
      const SubsetMask mask = 1 + static_cast<SubsetMask>(rng.below((1u << n) - 1));
      masses[mask] = masses.count(mask) ? masses[mask] + rat(1, 4) : rat(1, 4);
    }
    for (const Capacity& nu :
         {Capacity::belief(spaceN(n), masses), Capacity::plausibility(spaceN(n), masses)}) {
      for (int k = 0; k < 20; ++k) {
        std::vector<ExtRat> f;
        for (int i = 0; i < n; ++i)
          f.push_back(rng.chance(1, 12) ? ExtRat::infinity()
                                        : ExtRat(rng.pick(alpha_grid())));
        CHECK(choquet(f, nu) == choquet_oracle(f, nu));
      }
    }
  }
}

TEST_CASE("positive homogeneity and monotonicity of the integral") {
  Rng rng(707);
  const Capacity nu = example_capacity();
  for (int i = 0; i < 200; ++i) {
    std::vector<Rat> f = {rng.pick(alpha_grid()), rng.pick(alpha_grid())};
    const Rat alpha = rng.pick(alpha_grid());
    std::vector<Rat> scaled = {alpha * f[0], alpha * f[1]};
    CHECK(choquet(scaled, nu) == alpha * choquet(f, nu));
    std::vector<Rat> bigger = {f[0] + rng.pick(alpha_grid()), f[1] + rng.pick(alpha_grid())};
    CHECK(choquet(f, nu) <= choquet(bigger, nu));
  }
}

TEST_CASE("superlinearity for beliefs, sublinearity for plausibilities") {
  Rng rng(808);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(3));
    std::map<SubsetMask, Rat> masses;
    for (int i = 0, pieces = 1 + static_cast<int>(rng.below(3)); i < pieces; ++i) {
      const SubsetMask mask = 1 + static_cast<SubsetMask>(rng.below((1u << n) - 1));
      masses[mask] = masses.count(mask) ? masses[mask] + rat(1, 3) : rat(1, 3);
    }
    const Capacity bel = Capacity::belief(spaceN(n), masses);
    const Capacity pl = Capacity::plausibility(spaceN(n), masses);
    for (int k = 0; k < 60; ++k) {
      std::vector<Rat> f, g, comb;
      const Rat alpha = rng.pick(alpha_grid());
      const Rat beta = rng.pick(alpha_grid());
      for (int i = 0; i < n; ++i) {
        f.push_back(rng.pick(alpha_grid()));
        g.push_back(rng.pick(alpha_grid()));
        comb.push_back(alpha * f.back() + beta * g.back());
      }
      CHECK(choquet(comb, bel) >= alpha * choquet(f, bel) + beta * choquet(g, bel));
      CHECK(choquet(comb, pl) <= alpha * choquet(f, pl) + beta * choquet(g, pl));
    }
  }
}

TEST_CASE("duality: pl(A) = b(Omega) - b(complement of A), concavity flips") {
  Rng rng(909);
  for (int n = 2; n <= 6; ++n) {  // every size up to 6, checked exhaustively
    std::map<SubsetMask, Rat> masses;
    for (int i = 0, pieces = 1 + static_cast<int>(rng.below(4)); i < pieces; ++i) {
      const SubsetMask mask = 1 + static_cast<SubsetMask>(rng.below((1u << n) - 1));
      masses[mask] = masses.count(mask) ? masses[mask] + rat(1, 5) : rat(1, 5);
    }
    const Capacity bel = Capacity::belief(spaceN(n), masses);
    const Capacity pl = Capacity::plausibility(spaceN(n), masses);
    const SubsetMask full = bel.full_mask();
    for (SubsetMask a = 0; a <= full; ++a)
      CHECK(pl.at(a) == bel.at(full) - bel.at(full & static_cast<SubsetMask>(~a)));
    CHECK(bel.classify().convex);
    CHECK(pl.classify().concave);
    CHECK(Capacity::dual(pl).at(1) == bel.at(1));  // double dual returns
  }
}

TEST_CASE("omega-continuity desk check: ascending step chains stabilize") {
  const Capacity nu = example_capacity();
  const std::vector<Rat> f = {Rat(2), rat(3, 2)};
  const Rat limit = choquet(f, nu);
  Rat prev(0);
  for (int n = 0; n <= 6; ++n) {
    // f_n = min(f, n) pointwise: ascending to f.
    std::vector<Rat> fn;
    for (const Rat& v : f) fn.push_back(v <= Rat(n) ? v : Rat(n));
    const Rat vn = choquet(fn, nu);
    CHECK(prev <= vn);
    prev = vn;
  }
  CHECK(prev == limit);
}

TEST_CASE("extension formula: measured through the fixed rest of the state") {
  const Semantics sem = Semantics::real();
  const Capacity nu = example_capacity();
  const Env rho = Env::real({{"x", RealE(Rat(9))}, {"y", RealE(Rat(5))}});
  const auto ext = extend_capacity(nu, rho, sem);
  // C = {env : x = 1/2 and y = rho(y)} pulls back to outcome 1.
  CHECK(ext([](const Env& e) {
          return e.real_at("x") == RealE(rat(1, 2)) && e.real_at("y") == RealE(Rat(5));
        }) == rat(1, 5));
  // C touching only unaffected vars with another value pulls back to empty.
  CHECK(ext([](const Env& e) { return e.real_at("y") == RealE(Rat(0)); }) == Rat(0));
  // C = everything.
  CHECK(ext([](const Env&) { return true; }) == Rat(1));
}

TEST_CASE("wp_input: indicator, expectation, and unanimity-minimum cases") {
  const Semantics sem = Semantics::real();
  const Env rho = Env::real({{"x", RealE(Rat(0))}, {"y", RealE(Rat(3))}});
  InputModel model;

  SUBCASE("indicator of one outcome yields that outcome's capacity") {
    model.set_site(1, example_capacity());
    const ExtCont k = ExtCont::indicator(parse_test("x == 1/2"), sem);
    CHECK(wp_input(k, model, 1, {"x"}, rho, sem) == ExtRat(rat(1, 5)));
  }
  SUBCASE("probability capacities recover the expectation") {
    model.set_site(1, Capacity::probability(space2(), {rat(1, 2), rat(1, 2)}));
    const ExtCont k = expr_continuation(parse_expr("x + y"), sem);
    // E[x + 3] = (1/2)(1/2 + 3) + (1/2)(1 + 3) = 15/4.
    CHECK(wp_input(k, model, 1, {"x"}, rho, sem) == ExtRat(rat(15, 4)));
  }
  SUBCASE("a joint mass integrates to the minimum") {
    std::map<SubsetMask, Rat> m;
    m[0b11] = Rat(1);
    model.set_site(1, Capacity::belief(space2(), m));
    const ExtCont k = expr_continuation(parse_expr("x * 4"), sem);
    CHECK(wp_input(k, model, 1, {"x"}, rho, sem) == ExtRat(Rat(2)));  // min(2, 4)
  }
  SUBCASE("missing site and mismatched targets raise") {
    model.set_site(2, example_capacity());
    const ExtCont k = expr_continuation(parse_expr("x"), sem);
    CHECK_THROWS_AS(wp_input(k, model, 1, {"x"}, rho, sem), NoModelForSite);
    CHECK_THROWS_AS(wp_input(k, model, 2, {"z"}, rho, sem), Error);
  }
}

TEST_CASE("end-to-end wp through an input instruction") {
  const Semantics sem = Semantics::real();
  const Program p = parse_program("^1 (x) = input(); ^2 y = x + 1");
  auto model = std::make_shared<InputModel>();
  model->set_site(1, Capacity::probability(space2(), {rat(1, 4), rat(3, 4)}));
  WpConfig cfg;
  cfg.sem = sem;
  cfg.input = model;
  const ExtCont k = expr_continuation(parse_expr("y"), sem);
  const Env rho = Env::real({{"x", RealE(Rat(0))}, {"y", RealE(Rat(0))}});
  // E[x + 1] = (1/4)(3/2) + (3/4)(2) = 15/8.
  CHECK(wp<ExtNonNegDomain>(p, k, cfg)(rho) == ExtRat(rat(15, 8)));
}

TEST_CASE("capacity files: all three bodies and the plausibility dual") {
  const std::string prob_text =
      "outcomes: x=0.5 | x=1.0\n"
      "prob: 0.5 0.5\n";
  const Capacity p = parse_capacity_text(prob_text);
  CHECK(p.n() == 2);
  CHECK(p.space().vars == std::vector<std::string>{"x"});
  CHECK(p.at(0b11) == Rat(1));

  const std::string mass_text =
      "# a belief\n"
      "outcomes: x=0 | x=1\n"
      "mass: {1}=0.3 {1,2}=0.7\n";
  const Capacity b = parse_capacity_text(mass_text);
  CHECK(b.at(0b01) == rat(3, 10));
  CHECK(b.at(0b10) == Rat(0));
  CHECK(b.at(0b11) == Rat(1));

  const std::string table_text =
      "outcomes: x=0 | x=1\n"
      "table: {}=0 {1}=0.2 {2}=0.3 {1,2}=1\n";
  const Capacity t = parse_capacity_text(table_text);
  CHECK(t.at(0b01) == rat(1, 5));
  CHECK(t.classify().convex);

  const std::string plaus_text =
      "outcomes: x=0 | x=1\n"
      "plaus: {1,2}=1\n";
  const Capacity pl = parse_capacity_text(plaus_text);
  CHECK(pl.at(0b01) == Rat(1));  // plausibility of any non-empty set is 1
  CHECK(pl.at(0b11) == Rat(1));

  CHECK_THROWS_AS(parse_capacity_text("prob: 1"), FileFormatError);
  CHECK_THROWS_AS(parse_capacity_text("outcomes: x=1 | x=1\nprob: 1 0\n"), Error);
  CHECK_THROWS_AS(parse_capacity_text("outcomes: x=0 | x=1\ntable: {}=0 {1}=1\n"),
                  FileFormatError);
}

TEST_CASE("multi-variable outcome spaces merge over the base environment") {
  auto s = std::make_shared<OutcomeSpace>();
  s->vars = {"a", "b"};
  s->outcomes = {{RealE(Rat(0)), RealE(Rat(1))}, {RealE(Rat(1)), RealE(Rat(0))}};
  const Capacity nu = Capacity::probability(s, {rat(1, 2), rat(1, 2)});
  const Semantics sem = Semantics::real();
  const Env rho =
      Env::real({{"a", RealE(Rat(9))}, {"b", RealE(Rat(9))}, {"c", RealE(Rat(7))}});
  InputModel model;
  model.set_site(3, nu);
  const ExtCont k = expr_continuation(parse_expr("a + b + c"), sem);
  CHECK(wp_input(k, model, 3, {"a", "b"}, rho, sem) == ExtRat(Rat(8)));
}
