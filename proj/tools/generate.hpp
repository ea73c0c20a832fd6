#pragma once

#include <random>
#include <string>
#include <vector>

#include "cspimp/csp.hpp"
#include "cspimp/solver.hpp"

namespace cspimp::gen {

struct Generated {
  CspInstance instance;
  ConstraintLanguage language;
};

/// Name of the clause relation with the given polarity pattern, e.g. "or_+-".
std::string clause_relation_name(const std::vector<bool>& positive);
/// All tuples except the one falsifying every literal.
Relation clause_relation(const std::vector<bool>& positive);

/// Adds the clause as a constraint, registering its relation on first use.
void add_clause(Generated& g, const std::vector<Literal>& literals);

/// m random clauses over n variables. width2: widths 1..2 with any polarity; horn: at most one
/// positive literal; dualhorn: at most one negative literal. Widths run up to max_width.
Generated random_clauses(std::size_t n, std::size_t m, ClauseShape shape, std::size_t max_width, std::mt19937_64& rng);

/// {not x_k or x_{k+1} or x_{k+2} : odd k <= n - 2}, odd n >= 3.
Generated degree_chain(std::size_t n);

/// Random relations of the given arities closed under op, plus a random instance over them.
Generated random_closed(std::size_t n, std::size_t m, Operation op, std::size_t max_arity, std::mt19937_64& rng);

}  // namespace cspimp::gen
