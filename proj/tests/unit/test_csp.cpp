#include <random>

#include "cspimp/csp.hpp"
#include "cspimp/error.hpp"
#include "cspimp/solver.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cspimp;
using namespace cspimp::testing;

namespace {

Relation implication() { return Relation("imp", 2, {{0, 0}, {0, 1}, {1, 1}}); }

Relation nae3() {
  std::vector<std::vector<int>> t;
  for (int m = 1; m < 7; ++m) t.push_back({m & 1, m >> 1 & 1, m >> 2 & 1});
  return Relation("nae", 3, t);
}

std::set<TupleMask> mask_set(const Relation& r) { return {r.masks().begin(), r.masks().end()}; }

bool clauses_hold(const std::vector<Clause>& cs, TupleMask m) {
  for (const auto& c : cs) {
    bool sat = false;
    for (const auto& l : c) sat = sat || ((m >> (l.var - 1) & 1) == (l.positive ? 1u : 0u));
    if (!sat) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("relation construction") {
  Relation r("eq", 2, {{0, 0}, {1, 1}, {0, 0}});
  CHECK(r.size() == 2);
  CHECK(r.contains(TupleMask{0b11}));
  CHECK_FALSE(r.contains(TupleMask{0b01}));
  CHECK_THROWS_AS(Relation("bad", 2, {{0, 1, 1}}), InvalidArgument);
  CHECK_THROWS_AS(Relation("bad", 1, {{2}}), InvalidArgument);

  ConstraintLanguage lang;
  lang.add(r);
  CHECK_THROWS_AS(lang.add(r), InvalidArgument);
  CHECK(lang.find("eq") != nullptr);
  CHECK(lang.find("nope") == nullptr);

  CspInstance inst{2, {{"eq", {1, 3}}}};
  CHECK_THROWS_AS(inst.validate(lang), InvalidArgument);
  CspInstance short_scope{2, {{"eq", {1}}}};
  CHECK_THROWS_AS(short_scope.validate(lang), InvalidArgument);
  CspInstance unknown{2, {{"other", {1, 2}}}};
  CHECK_THROWS_AS(unknown.validate(lang), InvalidArgument);
}

TEST_CASE("partial assignments") {
  PartialAssignment a{{1, 1}, {3, 0}};
  CHECK(a.str() == "{x1=1, x3=0}");
  CHECK_THROWS_AS(a.bind(1, false), InvalidArgument);
  a.bind(1, true);
  CHECK(a.size() == 2);
  CHECK(a.extended_by(Assignment{1, 0, 0}));
  CHECK_FALSE(a.extended_by(Assignment{1, 0, 1}));
  CHECK(PartialAssignment{{1, 1}}.subset_of(a));
  CHECK_FALSE(a.subset_of(PartialAssignment{{1, 1}}));
}

TEST_CASE("polymorphism examples") {
  CHECK(check_polymorphism(implication(), Operation::min));
  CHECK_FALSE(check_polymorphism(implication(), Operation::minority));
  Relation diag("diag", 3, {{0, 0, 0}, {1, 1, 1}});
  for (Operation op : {Operation::min, Operation::max, Operation::majority, Operation::minority})
    CHECK(check_polymorphism(diag, op));
}

TEST_CASE("polymorphism checks agree with brute closure") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const std::size_t k = 1 + rng() % 4;
    std::vector<TupleMask> masks;
    for (TupleMask m = 0; m < (TupleMask{1} << k); ++m)
      if (rng() % 2) masks.push_back(m);
    Relation r = Relation::from_masks("r", k, masks);
    for (Operation op : all_operations) CHECK(check_polymorphism(r, op) == brute_closed(mask_set(r), k, op));
  }
}

TEST_CASE("classification examples") {
  Classification imp = classify_language(ConstraintLanguage({implication()}));
  for (Operation op : {Operation::min, Operation::max, Operation::majority, Operation::const0, Operation::const1})
    CHECK(imp.has(op));
  CHECK(imp.str() == "MajorityTract");

  Classification nae = classify_language(ConstraintLanguage({nae3()}));
  CHECK(nae.str() == "Hard(0)");
  CHECK(nae.operations() == std::vector<Operation>{Operation::negation});

  Classification empty = classify_language(ConstraintLanguage{});
  for (Operation op : all_operations) CHECK(empty.has(op));

  Relation or2("or", 2, {{0, 1}, {1, 0}, {1, 1}});
  Relation nand2("nand", 2, {{0, 0}, {0, 1}, {1, 0}});
  CHECK(classify_language(ConstraintLanguage({or2})).str() == "MajorityTract");

  Relation one_in_three("x", 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  Relation zero("z", 1, {{0}});
  CHECK(classify_language(ConstraintLanguage({one_in_three, zero})).str() == "Hard(0)");

  // smallest single relation with both constants and none of the other five operations
  Relation padded = Relation::from_masks("p", 4, {0b0000, 0b0011, 0b0101, 0b1111});
  Classification both = classify_language(ConstraintLanguage({padded}));
  CHECK(both.has(Operation::const0));
  CHECK(both.has(Operation::const1));
  CHECK_FALSE(both.has(Operation::min));
  CHECK_FALSE(both.has(Operation::max));
  CHECK_FALSE(both.has(Operation::majority));
  CHECK_FALSE(both.has(Operation::minority));
  CHECK_FALSE(both.has(Operation::negation));
  CHECK(both.str() == "OpenIMP1");
}

TEST_CASE("classification is monotone") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    RandomCsp a = random_csp(rng, 4, 4, 3, {});
    std::vector<Relation> rels;
    std::uint8_t prev = 0xff;
    for (const auto& r : a.language.relations()) {
      rels.push_back(r);
      std::uint8_t now = classify_language(ConstraintLanguage(rels)).polymorphisms;
      CHECK((now & ~prev) == 0);
      prev = now;
    }
  }
}

TEST_CASE("clause extraction examples") {
  auto w = extract_clauses(implication(), ClauseShape::width2);
  CHECK(w == std::vector<Clause>{{{1, false}, {2, true}}});

  std::vector<TupleMask> alo;
  for (TupleMask m = 1; m < 8; ++m) alo.push_back(m);
  auto d = extract_clauses(Relation::from_masks("alo", 3, alo), ClauseShape::dualhorn);
  CHECK(d == std::vector<Clause>{{{1, true}, {2, true}, {3, true}}});

  Relation full = Relation::from_masks("full", 2, {0, 1, 2, 3});
  for (ClauseShape s : {ClauseShape::width2, ClauseShape::horn, ClauseShape::dualhorn})
    CHECK(extract_clauses(full, s).empty());

  CHECK_THROWS_WITH_AS(extract_clauses(nae3(), ClauseShape::width2), "shape does not define relation",
                       InvalidArgument);
}

TEST_CASE("extracted clauses reconstruct closed relations") {
  std::mt19937_64 rng(13);
  const std::pair<Operation, ClauseShape> cases[] = {{Operation::majority, ClauseShape::width2},
                                                     {Operation::min, ClauseShape::horn},
                                                     {Operation::max, ClauseShape::dualhorn}};
  for (const auto& [op, shape] : cases) {
    for (int i = 0; i < 100; ++i) {
      const std::size_t k = 1 + rng() % 5;
      std::set<TupleMask> seed;
      for (int t = 0; t < 3; ++t) seed.insert(rng() % (TupleMask{1} << k));
      std::set<TupleMask> r = close_under(seed, k, {op});
      Relation rel = Relation::from_masks("r", k, {r.begin(), r.end()});
      auto cs = extract_clauses(rel, shape);
      for (TupleMask m = 0; m < (TupleMask{1} << k); ++m) CHECK(clauses_hold(cs, m) == (r.count(m) == 1));
    }
  }
}

TEST_CASE("parity equations reconstruct affine relations") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 1 + rng() % 5;
    std::set<TupleMask> seed;
    for (int t = 0; t < 3; ++t) seed.insert(rng() % (TupleMask{1} << k));
    std::set<TupleMask> r = close_under(seed, k, {Operation::minority});
    auto eqs = extract_parity_equations(Relation::from_masks("r", k, {r.begin(), r.end()}));
    for (TupleMask m = 0; m < (TupleMask{1} << k); ++m) {
      bool ok = true;
      for (const auto& e : eqs) ok = ok && (std::popcount(m & e.mask) % 2 == 1) == e.rhs;
      CHECK(ok == (r.count(m) == 1));
    }
  }
}

TEST_CASE("solver examples") {
  Relation or2("or", 2, {{0, 1}, {1, 0}, {1, 1}});
  ConstraintLanguage lang({or2, implication()});
  CspInstance inst{2, {{"or", {1, 2}}, {"imp", {1, 2}}}};
  auto sol = solve(inst, lang, {}, classify_language(lang));
  REQUIRE(sol);
  CHECK((*sol)[1] == 1);

  std::vector<TupleMask> horn;
  for (TupleMask m = 0; m < 8; ++m)
    if (m != 0b011) horn.push_back(m);
  ConstraintLanguage hl({Relation::from_masks("h", 3, horn)});
  CspInstance hi{3, {{"h", {1, 2, 3}}}};
  Classification hc = classify_language(hl);
  CHECK(hc.has(Operation::min));
  CHECK_FALSE(solve(hi, hl, {{1, 1}, {2, 1}, {3, 0}}, hc));
  CHECK_FALSE(is_extendable(hi, hl, {{1, 1}, {2, 1}, {3, 0}}, hc));
  CHECK(is_extendable(hi, hl, {}, hc));

  CspInstance empty{3, {}};
  auto any = solve(empty, ConstraintLanguage{}, {{1, 0}}, classify_language(ConstraintLanguage{}));
  REQUIRE(any);
  CHECK((*any)[0] == 0);

  ConstraintLanguage unsat({Relation("one", 1, {{1}}), Relation("zero", 1, {{0}})});
  CspInstance contra{1, {{"one", {1}}, {"zero", {1}}}};
  CHECK_FALSE(is_extendable(contra, unsat, {}, classify_language(unsat)));
}

TEST_CASE("solvers agree with exhaustive search") {
  std::mt19937_64 rng(34);
  const std::vector<std::vector<Operation>> families = {
      {Operation::majority}, {Operation::min}, {Operation::max}, {Operation::minority}, {}};
  for (std::size_t f = 0; f < families.size(); ++f) {
    for (int i = 0; i < 60; ++i) {
      const std::size_t n = 2 + rng() % 7;
      RandomCsp c = random_csp(rng, n, 1 + rng() % 6, 3, families[f]);
      Classification cls = classify_language(c.language);
      Solver solver(c.instance, c.language, cls);
      const std::map<Tractability, Solver::Method> expected = {
          {Tractability::majority, Solver::Method::two_sat}, {Tractability::min, Solver::Method::horn},
          {Tractability::max, Solver::Method::dual_horn},    {Tractability::minority, Solver::Method::affine},
          {Tractability::hard, Solver::Method::exhaustive},  {Tractability::open_imp1, Solver::Method::exhaustive}};
      CHECK(solver.method() == expected.at(cls.tractability));
      const auto sols = brute_solutions(c.instance, c.language);
      for (int t = 0; t < 8; ++t) {
        PartialAssignment p;
        for (Var v = 1; v <= n; ++v)
          if (rng() % 4 == 0) p.bind(v, rng() % 2);
        const bool expect = std::any_of(sols.begin(), sols.end(), [&](const Assignment& a) { return p.extended_by(a); });
        auto got = solver.solve(p);
        CHECK(got.has_value() == expect);
        if (got) {
          CHECK(p.extended_by(*got));
          CHECK(brute_satisfies(c.instance, c.language, *got));
        }
      }
    }
  }
}

TEST_CASE("exhaustive fallback limit") {
  std::vector<std::vector<int>> t;
  for (int m = 1; m < 7; ++m) t.push_back({m & 1, m >> 1 & 1, m >> 2 & 1});
  ConstraintLanguage lang({Relation("nae", 3, t)});
  CspInstance inst{30, {{"nae", {1, 2, 3}}}};
  CHECK_THROWS_WITH_AS(solve(inst, lang, {}, classify_language(lang), SolverOptions{20}),
                       "instance too large for fallback", BudgetExceeded);
}
