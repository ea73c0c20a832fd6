#include "cspimp/encoder.hpp"

#include <unordered_set>

#include "cspimp/error.hpp"

namespace cspimp {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::generic: return "generic";
    case Provenance::majority: return "majority";
    case Provenance::min: return "min";
    case Provenance::max: return "max";
  }
  return "?";
}

Polynomial clause_polynomial(const Clause& clause) {
  // positive literal x -> (x - 1), negative literal not x -> x
  Polynomial p(1);
  for (const Literal& l : clause) p *= Polynomial::shifted(l.var, l.positive ? 1 : 0);
  return p;
}

namespace {

class Collector {
 public:
  explicit Collector(GeneratorSet& out) : out_(out) {}
  void add(const Polynomial& p) {
    if (p.is_zero()) return;
    Polynomial m = p.monic(MonomialOrder::grlex());
    if (seen_.insert(m).second) out_.polynomials.push_back(std::move(m));
  }

 private:
  GeneratorSet& out_;
  std::unordered_set<Polynomial, PolynomialHash> seen_;
};

void add_domain(GeneratorSet& gs, Collector& c) {
  for (Var v = 1; v <= gs.num_vars; ++v) c.add(boolean_polynomial(v));
  gs.includes_domain = true;
}

GeneratorSet encode_clauses(const CspInstance& inst, const ConstraintLanguage& lang, Operation required,
                            ClauseShape shape, Provenance prov) {
  inst.validate(lang);
  if (!classify_language(lang).has(required))
    throw InvalidArgument(std::string("language is not closed under ") + to_string(required));
  GeneratorSet gs;
  gs.num_vars = inst.num_vars;
  gs.provenance = prov;
  Collector c(gs);
  for (const Clause& cl : instance_clauses(inst, lang, shape)) c.add(clause_polynomial(cl));
  add_domain(gs, c);
  return gs;
}

}  // namespace

GeneratorSet encode_generic(const CspInstance& inst, const ConstraintLanguage& lang) {
  inst.validate(lang);
  GeneratorSet gs;
  gs.num_vars = inst.num_vars;
  gs.provenance = Provenance::generic;
  Collector c(gs);
  for (const auto& con : inst.constraints) {
    const Relation& r = lang.at(con.relation);
    const std::size_t k = r.arity();
    // The indicator product prod_{t in R} (1 - delta_t) is, modulo the domain polynomials,
    // 1 - sum_{t in R} delta_t = sum_{t not in R} delta_t; the shorter sum is expanded.
    const bool use_complement = r.size() * 2 > (std::size_t{1} << k);
    Polynomial sum = use_complement ? Polynomial() : Polynomial(1);
    for (TupleMask t = 0; t < (TupleMask{1} << k); ++t) {
      if (r.contains(t) == use_complement) continue;
      Polynomial delta(1);
      for (std::size_t j = 0; j < k; ++j) {
        Polynomial x = Polynomial::variable(con.scope[j]);
        delta *= (t >> j & 1) ? x : Polynomial(1) - x;
      }
      if (use_complement) {
        sum += delta;
      } else {
        sum -= delta;
      }
    }
    c.add(multilinearize(sum));
  }
  add_domain(gs, c);
  return gs;
}

GeneratorSet encode_majority(const CspInstance& inst, const ConstraintLanguage& lang) {
  return encode_clauses(inst, lang, Operation::majority, ClauseShape::width2, Provenance::majority);
}

GeneratorSet encode_min(const CspInstance& inst, const ConstraintLanguage& lang) {
  return encode_clauses(inst, lang, Operation::min, ClauseShape::horn, Provenance::min);
}

GeneratorSet encode_max(const CspInstance& inst, const ConstraintLanguage& lang) {
  return encode_clauses(inst, lang, Operation::max, ClauseShape::dualhorn, Provenance::max);
}

}  // namespace cspimp
