#include "cspimp/imp.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cspimp/encoder.hpp"
#include "cspimp/error.hpp"
#include "cspimp/oracle.hpp"

namespace cspimp {

const char* to_string(Decision d) { return d == Decision::in ? "In" : "NotIn"; }

const char* to_string(Pipeline p) {
  switch (p) {
    case Pipeline::trivial: return "trivial";
    case Pipeline::nullstellensatz: return "nullstellensatz";
    case Pipeline::majority: return "majority";
    case Pipeline::min_truncated: return "min-truncated";
    case Pipeline::max_truncated: return "max-truncated";
    case Pipeline::sparse_min: return "sparse-min";
    case Pipeline::sparse_max: return "sparse-max";
    case Pipeline::oracle: return "oracle";
  }
  return "?";
}

const char* to_string(EvidenceKind k) {
  switch (k) {
    case EvidenceKind::none: return "none";
    case EvidenceKind::unsatisfiable: return "unsatisfiable";
    case EvidenceKind::syntactic: return "syntactic";
    case EvidenceKind::semantic: return "semantic";
    case EvidenceKind::sparse: return "sparse";
    case EvidenceKind::exhaustive: return "exhaustive";
  }
  return "?";
}

namespace {

void check_query(const ImpQuery& q) {
  q.instance.validate(q.language);
  if (q.f.max_var() > q.instance.num_vars) throw InvalidArgument("polynomial uses variables outside the instance");
  if (q.degree_bound && q.f.degree() > *q.degree_bound)
    throw InvalidArgument("polynomial degree " + std::to_string(q.f.degree()) + " exceeds the bound " +
                          std::to_string(*q.degree_bound));
}

std::vector<Polynomial> domain_polynomials(std::size_t n) {
  std::vector<Polynomial> out;
  for (Var v = 1; v <= n; ++v) out.push_back(boolean_polynomial(v));
  return out;
}

/// A solution on which r is nonzero. Uses the 2-terms structure when available, else the support of r.
std::optional<Assignment> nonvanishing_solution(const Polynomial& r, const Solver& solver,
                                                std::optional<TwoTermsKind> kind) {
  if (r.is_zero()) return std::nullopt;
  if (kind) {
    TwoTermsClass cls = classify_two_terms(r);
    bool in_family = kind == TwoTermsKind::min ? cls.positive.has_value() : cls.negative.has_value();
    if (in_family && !cls.boolean_var) {
      for (const auto& a : minimal_nonvanishing_assignments(r, *kind))
        if (auto sol = solver.solve(a)) return sol;
      return std::nullopt;
    }
  }
  const std::vector<Var> vars = r.variables();
  if (vars.size() > 24) throw BudgetExceeded("support too large for witness search");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
    std::map<Var, std::uint8_t> point;
    PartialAssignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const bool bit = mask >> i & 1;
      point[vars[i]] = bit;
      a.bind(vars[i], bit);
    }
    if (evaluate(r, point) == 0) continue;
    if (auto sol = solver.solve(a)) return sol;
  }
  return std::nullopt;
}

std::optional<TwoTermsKind> kind_of(Tractability t) {
  if (t == Tractability::min) return TwoTermsKind::min;
  if (t == Tractability::max) return TwoTermsKind::max;
  return std::nullopt;
}

std::string oracle_note(const Classification& cls) {
  switch (cls.tractability) {
    case Tractability::minority: return "oracle (Minority closure; no structured basis algorithm)";
    case Tractability::open_imp1: return "oracle (OpenIMP1: no polynomial algorithm known)";
    default: return "oracle (" + cls.str() + ")";
  }
}

MembershipVerdict oracle_verdict(const ImpQuery& q, const Classification& cls, const ImpOptions& opts) {
  if (q.instance.num_vars > opts.oracle_max_vars) throw UnsupportedClass("class not supported at this size");
  MembershipVerdict v;
  v.pipeline = Pipeline::oracle;
  v.note = oracle_note(cls);
  SolutionSet sols = enumerate_solutions(q.instance, q.language, opts.oracle_max_vars);
  for (const auto& p : sols.points) {
    if (evaluate(q.f, p) != 0) {
      v.decision = Decision::not_in;
      v.witness = p;
      return v;
    }
  }
  v.decision = Decision::in;
  v.evidence = EvidenceKind::exhaustive;
  return v;
}

SolverOptions solver_options(const ImpOptions& opts, const Classification& cls) {
  SolverOptions s = opts.solver;
  if (cls.tractability == Tractability::hard || cls.tractability == Tractability::open_imp1)
    s.max_vars = std::max(s.max_vars, opts.oracle_max_vars);
  return s;
}

MembershipVerdict majority_verdict(const ImpQuery& q, const Solver& solver, const ImpOptions& opts) {
  MembershipVerdict v;
  v.pipeline = Pipeline::majority;
  BuchbergerOptions bo = opts.buchberger;
  bo.track_derivation = true;
  GroebnerBasis gb =
      autoreduce(buchberger(encode_majority(q.instance, q.language), MonomialOrder::grlex(), Strategy::majority, bo));
  v.basis = gb.polynomials;
  v.derivation = gb.derivation;
  v.basis_items = gb.derivation_index;
  v.transcript = divide(q.f, v.basis, MonomialOrder::grlex());
  if (v.transcript.remainder.is_zero()) {
    v.decision = Decision::in;
    v.evidence = EvidenceKind::syntactic;
  } else {
    v.decision = Decision::not_in;
    v.witness = nonvanishing_solution(v.transcript.remainder, solver, std::nullopt);
    if (!v.witness) throw Error("nonzero remainder without a witness");
  }
  return v;
}

MembershipVerdict truncated_verdict(const ImpQuery& q, TwoTermsKind kind, const Polynomial& fm, const Solver& solver,
                                    const ImpOptions& opts) {
  MembershipVerdict v;
  v.pipeline = kind == TwoTermsKind::min ? Pipeline::min_truncated : Pipeline::max_truncated;
  const MonomialOrder ord = MonomialOrder::grlex();
  v.domain_stage = divide(q.f, domain_polynomials(q.instance.num_vars), ord);
  TruncatedBasis tb = truncated_basis(q.instance, q.language, kind, std::max<std::uint32_t>(fm.degree(), 1),
                                      opts.truncated);
  v.basis = tb.basis.polynomials;
  v.attestations = std::move(tb.attestations);
  v.transcript = divide(v.domain_stage->remainder, v.basis, ord);
  if (v.transcript.remainder.is_zero()) {
    v.decision = Decision::in;
    v.evidence = EvidenceKind::semantic;
  } else {
    v.decision = Decision::not_in;
    v.witness = nonvanishing_solution(v.transcript.remainder, solver, kind);
    if (!v.witness) throw Error("nonzero remainder without a witness");
  }
  return v;
}

/// Coordinates of a multilinear p in the products tau(S) of the family: x_S for min, prod (x - 1) for max.
std::map<std::vector<Var>, Rational> family_coordinates(const Polynomial& p, TwoTermsKind kind) {
  std::map<std::vector<Var>, Rational> out;
  for (const auto& t : p.terms()) {
    std::vector<Var> vars = t.monomial.variables();
    if (kind == TwoTermsKind::min) {
      out[vars] += t.coeff;
      continue;
    }
    // x_S = prod (y + 1) with y = x - 1: every subset of S appears once
    const std::size_t k = vars.size();
    if (k > 24) throw BudgetExceeded("term too large for the sparse rewrite");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      std::vector<Var> sub;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1) sub.push_back(vars[i]);
      out[sub] += t.coeff;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace

MembershipVerdict decide(const ImpQuery& q, const ImpOptions& opts) {
  check_query(q);
  if (q.f.is_zero()) {
    MembershipVerdict v;
    v.note = "zero polynomial";
    return v;
  }
  const Classification cls = classify_language(q.language);
  const Polynomial fm = multilinearize(q.f);
  const bool tractable = cls.tractability == Tractability::majority || cls.tractability == Tractability::min ||
                         cls.tractability == Tractability::max;
  if (!tractable) return oracle_verdict(q, cls, opts);

  Solver solver(q.instance, q.language, cls, solver_options(opts, cls));
  if (fm.is_constant()) {
    MembershipVerdict v;
    v.pipeline = Pipeline::nullstellensatz;
    if (fm.is_zero()) {
      // f is a combination of domain polynomials
      v.domain_stage = divide(q.f, domain_polynomials(q.instance.num_vars), MonomialOrder::grlex());
      v.decision = Decision::in;
      v.evidence = EvidenceKind::semantic;
      return v;
    }
    v.witness = solver.solve(PartialAssignment{});
    v.decision = v.witness ? Decision::not_in : Decision::in;
    if (!v.witness) v.evidence = EvidenceKind::unsatisfiable;
    return v;
  }
  if (cls.tractability == Tractability::majority) return majority_verdict(q, solver, opts);
  return truncated_verdict(q, *kind_of(cls.tractability), fm, solver, opts);
}

MembershipVerdict decide_sparse(const ImpQuery& q, TwoTermsKind kind, const ImpOptions& opts) {
  check_query(q);
  const Classification cls = classify_language(q.language);
  const Operation needed = kind == TwoTermsKind::min ? Operation::min : Operation::max;
  if (!cls.has(needed)) throw InvalidArgument(std::string("language is not closed under ") + to_string(needed));
  Solver solver(q.instance, q.language, cls, opts.solver);
  const int shift = kind == TwoTermsKind::min ? 0 : 1;
  const MonomialOrder ord = MonomialOrder::grlex();

  MembershipVerdict v;
  v.pipeline = kind == TwoTermsKind::min ? Pipeline::sparse_min : Pipeline::sparse_max;
  std::map<std::vector<Var>, Rational> terms = family_coordinates(multilinearize(q.f), kind);
  std::map<std::vector<Var>, std::optional<TwoTermsMembership>> singles;
  auto tau = [&](const std::vector<Var>& s) { return ShiftedProduct{Rational(1), s, shift}.expand(); };
  auto single = [&](const std::vector<Var>& s) -> const TwoTermsMembership& {
    auto& slot = singles[s];
    if (!slot) {
      ++v.single_tests;
      slot = two_terms_member(tau(s), solver, kind);
    }
    return *slot;
  };

  while (!terms.empty()) {
    std::vector<std::vector<Var>> order;
    for (const auto& [s, w] : terms) order.push_back(s);
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
      return ord.greater(Monomial::product(a), Monomial::product(b));
    });
    bool progressed = false;
    auto take = [&](const std::vector<Var>& si, const Polynomial& member, std::vector<PartialAssignment> att,
                    const std::vector<Var>* sj, int alpha) {
      const Rational w = terms.at(si);
      v.sparse_steps.push_back({w, member, std::move(att)});
      terms.erase(si);
      if (sj) {
        Rational& wj = terms[*sj];
        wj -= w * alpha;
        if (wj == 0) terms.erase(*sj);
      }
      progressed = true;
    };
    if (order.size() == 1) {
      const TwoTermsMembership& m = single(order[0]);
      if (m.member) take(order[0], tau(order[0]), m.attestation, nullptr, 0);
    }
    for (std::size_t i = 0; i < order.size() && !progressed; ++i) {
      for (std::size_t j = i + 1; j < order.size() && !progressed; ++j) {
        for (const std::vector<Var>* s : {&order[i], &order[j]}) {
          const TwoTermsMembership& m = single(*s);
          if (m.member) {
            take(*s, tau(*s), m.attestation, nullptr, 0);
            break;
          }
        }
        for (int alpha : {1, -1}) {
          if (progressed) break;
          Polynomial cand = tau(order[i]) + tau(order[j]) * Rational(alpha);
          ++v.pair_tests;
          TwoTermsMembership m = two_terms_member(cand, solver, kind);
          if (m.member) take(order[i], cand, std::move(m.attestation), &order[j], alpha);
        }
      }
    }
    if (progressed) continue;

    // No pair is a member: the remaining combination agrees with f on every solution.
    Polynomial rest;
    for (const auto& [s, w] : terms) rest += tau(s) * w;
    v.witness = nonvanishing_solution(rest, solver, kind);
    if (v.witness) {
      v.decision = Decision::not_in;
      v.sparse_steps.clear();
      return v;
    }
    MembershipVerdict full = decide(q, opts);
    full.pair_tests = v.pair_tests;
    full.single_tests = v.single_tests;
    full.sparse_fallback = true;
    return full;
  }
  v.decision = Decision::in;
  v.evidence = EvidenceKind::sparse;
  return v;
}

std::optional<Assignment> find_witness(const CspInstance& inst, const ConstraintLanguage& lang, const Polynomial& f,
                                       const ImpOptions& opts) {
  return decide(ImpQuery{inst, lang, f, std::nullopt}, opts).witness;
}

bool verify_evidence(const MembershipVerdict& v, const ImpQuery& q, const ImpOptions& opts) {
  try {
    check_query(q);
    const std::size_t n = q.instance.num_vars;
    if (v.decision == Decision::not_in) {
      if (!v.witness || v.witness->size() != n) return false;
      return satisfies(q.instance, q.language, *v.witness) && evaluate(q.f, *v.witness) != 0;
    }
    const Classification cls = classify_language(q.language);
    const MonomialOrder ord = MonomialOrder::grlex();
    auto fresh_solver = [&] { return Solver(q.instance, q.language, cls, solver_options(opts, cls)); };
    auto attested = [&](const Polynomial& p, const std::vector<PartialAssignment>& att, TwoTermsKind kind,
                        const Solver& solver) {
      if (att != minimal_nonvanishing_assignments(p, kind)) return false;
      return std::none_of(att.begin(), att.end(), [&](const PartialAssignment& a) { return solver.is_extendable(a); });
    };
    switch (v.evidence) {
      case EvidenceKind::none: return q.f.is_zero();
      case EvidenceKind::unsatisfiable: return !fresh_solver().is_extendable(PartialAssignment{});
      case EvidenceKind::exhaustive: return membership_by_evaluation(q.instance, q.language, q.f, opts.oracle_max_vars);
      case EvidenceKind::syntactic: {
        if (!v.transcript.remainder.is_zero() || !(expand(v.transcript, v.basis) == q.f)) return false;
        if (!v.derivation || !v.derivation->verify() || v.basis_items.size() != v.basis.size()) return false;
        for (std::size_t i = 0; i < v.basis.size(); ++i)
          if (v.basis_items[i] >= v.derivation->size() || !(v.derivation->item(v.basis_items[i]) == v.basis[i]))
            return false;
        return v.derivation->generators == encode_majority(q.instance, q.language).polynomials;
      }
      case EvidenceKind::semantic: {
        if (!v.domain_stage || !(expand(*v.domain_stage, domain_polynomials(n)) == q.f)) return false;
        if (v.basis.empty() && v.pipeline == Pipeline::nullstellensatz) return v.domain_stage->remainder.is_zero();
        if (!v.transcript.remainder.is_zero() || !(expand(v.transcript, v.basis) == v.domain_stage->remainder))
          return false;
        const TwoTermsKind kind = v.pipeline == Pipeline::min_truncated ? TwoTermsKind::min : TwoTermsKind::max;
        if (v.attestations.size() != v.basis.size()) return false;
        Solver solver = fresh_solver();
        for (std::size_t i = 0; i < v.basis.size(); ++i) {
          const SemanticAttestation& a = v.attestations[i];
          if (!(a.polynomial == v.basis[i])) return false;
          if (a.polynomial == Polynomial(1)) {
            if (a.nonvanishing != std::vector<PartialAssignment>{PartialAssignment{}} ||
                solver.is_extendable(PartialAssignment{}))
              return false;
            continue;
          }
          if (!attested(a.polynomial, a.nonvanishing, kind, solver)) return false;
        }
        return true;
      }
      case EvidenceKind::sparse: {
        const TwoTermsKind kind = v.pipeline == Pipeline::sparse_min ? TwoTermsKind::min : TwoTermsKind::max;
        Polynomial sum;
        Solver solver = fresh_solver();
        for (const auto& step : v.sparse_steps) {
          if (!attested(step.member, step.attestation, kind, solver)) return false;
          sum += step.member * step.weight;
        }
        return sum == multilinearize(q.f);
      }
    }
  } catch (const Error&) {
    return false;
  }
  return false;
}

}  // namespace cspimp
