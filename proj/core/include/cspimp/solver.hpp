#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cspimp/csp.hpp"

namespace cspimp {

struct Literal {
  Var var;
  bool positive;
  auto operator<=>(const Literal&) const = default;
};

/// Disjunction of literals, sorted by variable, no repeated variable.
using Clause = std::vector<Literal>;

enum class ClauseShape { width2, horn, dualhorn };
const char* to_string(ClauseShape shape);

/// Minimal entailed clauses of the shape over coordinates 1..arity. Throws InvalidArgument
/// "shape does not define relation" when their conjunction is not exactly r. Cached per (relation, shape).
std::vector<Clause> extract_clauses(const Relation& r, ClauseShape shape);

/// Clauses of every constraint mapped onto instance variables; tautologies dropped, duplicates removed.
std::vector<Clause> instance_clauses(const CspInstance& inst, const ConstraintLanguage& lang, ClauseShape shape);

/// Affine description a.x = b of a minority-closed relation, a as a coordinate mask.
struct ParityEquation {
  TupleMask mask;
  bool rhs;
};
std::vector<ParityEquation> extract_parity_equations(const Relation& r);

struct SolverOptions {
  std::size_t max_vars = 20;  // exhaustive fallback limit
};

/// Extension oracle compiled once per instance; `solve` may be called repeatedly.
class Solver {
 public:
  enum class Method { two_sat, horn, dual_horn, affine, exhaustive };

  Solver(const CspInstance& inst, const ConstraintLanguage& lang, const Classification& cls,
         SolverOptions opts = {});

  /// A full satisfying assignment extending partial, or nullopt. Throws BudgetExceeded
  /// "instance too large for fallback" when exhaustive search would exceed the variable limit.
  std::optional<Assignment> solve(const PartialAssignment& partial) const;
  bool is_extendable(const PartialAssignment& partial) const { return solve(partial).has_value(); }
  Method method() const { return method_; }
  std::size_t num_vars() const { return n_; }

 private:
  std::optional<Assignment> solve_two_sat(const PartialAssignment& partial) const;
  std::optional<Assignment> solve_horn(const PartialAssignment& partial, bool dual) const;
  std::optional<Assignment> solve_affine(const PartialAssignment& partial) const;
  std::optional<Assignment> solve_exhaustive(const PartialAssignment& partial) const;

  const CspInstance* inst_;
  const ConstraintLanguage* lang_;
  SolverOptions opts_;
  Method method_;
  std::size_t n_;
  bool trivially_unsat_ = false;
  std::vector<Clause> clauses_;
  std::vector<std::vector<std::uint64_t>> equations_;  // GF(2) rows, bit n is the right-hand side
};

const char* to_string(Solver::Method m);

std::optional<Assignment> solve(const CspInstance& inst, const ConstraintLanguage& lang,
                                const PartialAssignment& partial, const Classification& cls,
                                SolverOptions opts = {});
bool is_extendable(const CspInstance& inst, const ConstraintLanguage& lang, const PartialAssignment& partial,
                   const Classification& cls, SolverOptions opts = {});

}  // namespace cspimp
