#include "cspimp/oracle.hpp"

#include <functional>

#include "cspimp/encoder.hpp"
#include "cspimp/error.hpp"

namespace cspimp {

SolutionSet enumerate_solutions(const CspInstance& inst, const ConstraintLanguage& lang, std::size_t max_vars) {
  inst.validate(lang);
  const std::size_t n = inst.num_vars;
  if (n > max_vars)
    throw BudgetExceeded("instance exceeds the oracle limit of " + std::to_string(max_vars) + " variables");
  SolutionSet out;
  out.n = n;
  std::vector<std::vector<const Constraint*>> due(n + 1);
  for (const auto& con : inst.constraints) {
    Var last = 0;
    for (Var v : con.scope) last = std::max(last, v);
    due[last].push_back(&con);
  }
  for (const Constraint* con : due[0])
    if (!lang.at(con->relation).contains(TupleMask{0})) return out;
  Assignment a(n, 0);
  std::function<void(Var)> walk = [&](Var v) {
    if (v > n) {
      out.points.push_back(a);
      return;
    }
    for (std::uint8_t value = 0; value < 2; ++value) {
      a[v - 1] = value;
      bool ok = true;
      for (const Constraint* con : due[v]) {
        TupleMask m = 0;
        for (std::size_t j = 0; j < con->scope.size(); ++j)
          if (a[con->scope[j] - 1]) m |= TupleMask{1} << j;
        if (!lang.at(con->relation).contains(m)) {
          ok = false;
          break;
        }
      }
      if (ok) walk(v + 1);
    }
  };
  walk(1);
  return out;
}

bool membership_by_evaluation(const SolutionSet& sols, const Polynomial& f) {
  if (f.max_var() > sols.n) throw InvalidArgument("polynomial uses variables outside the instance");
  for (const auto& p : sols.points)
    if (evaluate(f, p) != 0) return false;
  return true;
}

bool membership_by_evaluation(const CspInstance& inst, const ConstraintLanguage& lang, const Polynomial& f,
                              std::size_t max_vars) {
  return membership_by_evaluation(enumerate_solutions(inst, lang, max_vars), f);
}

GroebnerBasis reference_reduced_gb(const CspInstance& inst, const ConstraintLanguage& lang, const MonomialOrder& ord,
                                   const BuchbergerOptions& opts, std::size_t max_vars) {
  if (inst.num_vars > max_vars)
    throw BudgetExceeded("instance exceeds the reference basis limit of " + std::to_string(max_vars) + " variables");
  return autoreduce(buchberger(encode_generic(inst, lang), ord, Strategy::generic, opts));
}

}  // namespace cspimp
