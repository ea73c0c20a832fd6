#include "generate.hpp"

#include <algorithm>
#include <numeric>

#include "cspimp/error.hpp"

namespace cspimp::gen {

std::string clause_relation_name(const std::vector<bool>& positive) {
  std::string name = "or_";
  for (bool p : positive) name += p ? '+' : '-';
  return name;
}

Relation clause_relation(const std::vector<bool>& positive) {
  const std::size_t k = positive.size();
  TupleMask falsifying = 0;
  for (std::size_t j = 0; j < k; ++j)
    if (!positive[j]) falsifying |= TupleMask{1} << j;
  std::vector<TupleMask> masks;
  for (TupleMask m = 0; m < (TupleMask{1} << k); ++m)
    if (m != falsifying) masks.push_back(m);
  return Relation::from_masks(clause_relation_name(positive), k, std::move(masks));
}

void add_clause(Generated& g, const std::vector<Literal>& literals) {
  std::vector<bool> pattern;
  Constraint c;
  for (const Literal& l : literals) {
    pattern.push_back(l.positive);
    c.scope.push_back(l.var);
  }
  c.relation = g.language.add_if_absent(clause_relation(pattern)).name();
  g.instance.constraints.push_back(std::move(c));
}

Generated random_clauses(std::size_t n, std::size_t m, ClauseShape shape, std::size_t max_width, std::mt19937_64& rng) {
  if (n == 0) throw InvalidArgument("need at least one variable");
  Generated g;
  g.instance.num_vars = n;
  const std::size_t cap = std::min(shape == ClauseShape::width2 ? std::size_t{2} : max_width, n);
  std::vector<Var> vars(n);
  std::iota(vars.begin(), vars.end(), Var{1});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t width = std::uniform_int_distribution<std::size_t>(1, cap)(rng);
    std::shuffle(vars.begin(), vars.end(), rng);
    std::vector<Literal> lits;
    for (std::size_t j = 0; j < width; ++j) lits.push_back({vars[j], rng() % 2 == 0});
    if (shape != ClauseShape::width2) {
      // Horn: all negative but possibly one; dual-Horn: all positive but possibly one
      const bool majority_sign = shape == ClauseShape::dualhorn;
      for (auto& l : lits) l.positive = majority_sign;
      if (rng() % 2 == 0) lits[rng() % width].positive = !majority_sign;
    }
    std::sort(lits.begin(), lits.end());
    add_clause(g, lits);
  }
  return g;
}

Generated degree_chain(std::size_t n) {
  if (n < 3 || n % 2 == 0) throw InvalidArgument("degree chain needs an odd n >= 3");
  Generated g;
  g.instance.num_vars = n;
  for (Var k = 1; k + 2 <= n; k += 2)
    add_clause(g, {{k, false}, {k + 1, true}, {k + 2, true}});
  return g;
}

Generated random_closed(std::size_t n, std::size_t m, Operation op, std::size_t max_arity, std::mt19937_64& rng) {
  if (n == 0) throw InvalidArgument("need at least one variable");
  Generated g;
  g.instance.num_vars = n;
  const std::size_t cap = std::min(max_arity, n);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, cap)(rng);
    // close a random seed set under op by saturation
    std::vector<TupleMask> seed;
    const TupleMask full = (TupleMask{1} << k) - 1;
    for (TupleMask t = 0; t <= full; ++t)
      if (rng() % 3 == 0) seed.push_back(t);
    Relation r;
    std::size_t guard = 0;
    while (true) {
      r = Relation::from_masks("r" + std::to_string(i), k, seed);
      if (check_polymorphism(r, op)) break;
      std::vector<TupleMask> grown = r.masks();
      for (TupleMask a : r.masks())
        for (TupleMask b : r.masks())
          for (TupleMask c : r.masks()) {
            TupleMask out = 0;
            switch (op) {
              case Operation::min: out = a & b; break;
              case Operation::max: out = a | b; break;
              case Operation::majority: out = (a & b) | (a & c) | (b & c); break;
              case Operation::minority: out = a ^ b ^ c; break;
              case Operation::negation: out = ~a & full; break;
              case Operation::const0: out = 0; break;
              case Operation::const1: out = full; break;
            }
            grown.push_back(out);
          }
      seed = std::move(grown);
      if (++guard > 64) throw Error("closure did not converge");
    }
    std::vector<Var> vars(n);
    std::iota(vars.begin(), vars.end(), Var{1});
    std::shuffle(vars.begin(), vars.end(), rng);
    vars.resize(k);
    g.language.add(r);
    g.instance.constraints.push_back({r.name(), vars});
  }
  return g;
}

}  // namespace cspimp::gen
