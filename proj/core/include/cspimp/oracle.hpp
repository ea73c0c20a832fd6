#pragma once

#include <vector>

#include "cspimp/csp.hpp"
#include "cspimp/groebner.hpp"
#include "cspimp/polynomial.hpp"

namespace cspimp {

struct SolutionSet {
  std::size_t n = 0;
  std::vector<Assignment> points;  // ascending, x1 most significant
};

/// Exhaustive solution set. Throws BudgetExceeded above max_vars.
SolutionSet enumerate_solutions(const CspInstance& inst, const ConstraintLanguage& lang, std::size_t max_vars = 20);

/// f vanishes on every solution.
bool membership_by_evaluation(const SolutionSet& sols, const Polynomial& f);
bool membership_by_evaluation(const CspInstance& inst, const ConstraintLanguage& lang, const Polynomial& f,
                              std::size_t max_vars = 20);

/// Generic Buchberger on encode_generic, autoreduced. Throws BudgetExceeded above max_vars.
GroebnerBasis reference_reduced_gb(const CspInstance& inst, const ConstraintLanguage& lang,
                                   const MonomialOrder& ord = MonomialOrder::grlex(),
                                   const BuchbergerOptions& opts = {}, std::size_t max_vars = 12);

}  // namespace cspimp
