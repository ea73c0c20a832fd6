#pragma once

#include <vector>

#include "cspimp/csp.hpp"
#include "cspimp/polynomial.hpp"
#include "cspimp/solver.hpp"

namespace cspimp {

enum class Provenance { generic, majority, min, max };
const char* to_string(Provenance p);

struct GeneratorSet {
  std::vector<Polynomial> polynomials;
  std::size_t num_vars = 0;
  Provenance provenance = Provenance::generic;
  bool includes_domain = true;
};

/// Indicator-product generators plus x_i^2 - x_i for every variable; monic under grlex.
GeneratorSet encode_generic(const CspInstance& inst, const ConstraintLanguage& lang);
/// Width-2 clauses mapped into the sets B, Q, L. Requires Majority.
GeneratorSet encode_majority(const CspInstance& inst, const ConstraintLanguage& lang);
/// Horn clauses as positive 2-terms polynomials. Requires Min.
GeneratorSet encode_min(const CspInstance& inst, const ConstraintLanguage& lang);
/// Dual-Horn clauses as negative 2-terms polynomials. Requires Max.
GeneratorSet encode_max(const CspInstance& inst, const ConstraintLanguage& lang);

/// Polynomial of a single clause: vanishes exactly on the satisfying points.
Polynomial clause_polynomial(const Clause& clause);

}  // namespace cspimp
