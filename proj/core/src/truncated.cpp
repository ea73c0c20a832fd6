#include <algorithm>
#include <limits>
#include <map>

#include "cspimp/error.hpp"
#include "cspimp/groebner.hpp"

namespace cspimp {

namespace {

struct SignedTerm {
  Rational coeff;
  std::vector<Var> vars;
};

bool contains_all(const std::vector<Var>& big, const std::vector<Var>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

std::vector<PartialAssignment> minimal_nonvanishing_assignments(const Polynomial& p, TwoTermsKind kind) {
  if (p.is_zero()) return {};
  TwoTermsClass cls = classify_two_terms(p);
  if (cls.boolean_var) return {};
  const auto& form = kind == TwoTermsKind::min ? cls.positive : cls.negative;
  if (!form) throw InvalidArgument("polynomial is outside the 2-terms class");

  // A term is active when all of its variables sit at `on`; otherwise it vanishes.
  const bool on = kind == TwoTermsKind::min;
  auto active_value = [&](const SignedTerm& t) {
    Rational v = t.coeff;
    if (!on && t.vars.size() % 2 == 1) v = -v;
    return v;
  };
  std::vector<SignedTerm> terms;
  for (const ShiftedProduct* sp : {&form->first, &form->second})
    if (sp->coeff != 0) terms.push_back({sp->coeff, sp->vars});

  std::vector<PartialAssignment> found;
  auto pin = [&](const std::vector<Var>& vars, PartialAssignment& a) {
    for (Var v : vars) a.bind(v, on);
  };
  if (terms.size() == 1) {
    PartialAssignment a;
    pin(terms[0].vars, a);
    return {a};
  }
  for (int which = 0; which < 2; ++which) {
    const SignedTerm& x = terms[which];
    const SignedTerm& y = terms[1 - which];
    std::vector<Var> rest;
    std::set_difference(y.vars.begin(), y.vars.end(), x.vars.begin(), x.vars.end(), std::back_inserter(rest));
    const bool both_zero = active_value(x) + active_value(y) == 0;
    const bool y_free = !rest.empty();
    const bool inactive_zero = y_free && active_value(x) == 0;
    PartialAssignment base;
    pin(x.vars, base);
    if (!y_free) {
      if (!both_zero) found.push_back(base);
      continue;
    }
    if (both_zero && inactive_zero) continue;
    if (!both_zero && !inactive_zero) {
      found.push_back(base);
    } else if (inactive_zero) {
      PartialAssignment a = base;
      pin(rest, a);
      found.push_back(a);
    } else {
      for (Var u : rest) {
        PartialAssignment a = base;
        a.bind(u, !on);
        found.push_back(a);
      }
    }
  }
  std::vector<PartialAssignment> out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < found.size() && !dominated; ++j) {
      if (i == j || !found[j].subset_of(found[i])) continue;
      dominated = !(found[j] == found[i]) || j < i;
    }
    if (!dominated) out.push_back(found[i]);
  }
  return out;
}

TwoTermsMembership two_terms_member(const Polynomial& p, const Solver& solver, TwoTermsKind kind) {
  TwoTermsMembership out;
  out.attestation = minimal_nonvanishing_assignments(p, kind);
  for (const auto& a : out.attestation) {
    if (auto sol = solver.solve(a)) {
      out.witness = std::move(sol);
      out.attestation.clear();
      return out;
    }
  }
  out.member = true;
  return out;
}

TwoTermsMembership two_terms_member(const Polynomial& p, const CspInstance& inst, const ConstraintLanguage& lang,
                                    TwoTermsKind kind) {
  Solver solver(inst, lang, classify_language(lang));
  return two_terms_member(p, solver, kind);
}

std::uint64_t truncated_candidate_count(std::size_t n, std::uint32_t d) {
  constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t subsets = 0;
  std::uint64_t binom = 1;
  for (std::size_t i = 0; i <= std::min<std::size_t>(d, n); ++i) {
    if (i > 0) {
      // binom = C(n, i), exact since C(n, i-1) * (n-i+1) is divisible by i
      if (binom > cap / (n - i + 1)) return cap;
      binom = binom * (n - i + 1) / i;
    }
    if (subsets > cap - binom) return cap;
    subsets += binom;
  }
  if (subsets != 0 && subsets > (cap - n) / subsets) return cap;
  return subsets * subsets + n;
}

TruncatedBasis truncated_basis(const CspInstance& inst, const ConstraintLanguage& lang, TwoTermsKind kind,
                               std::uint32_t d, const TruncatedOptions& opts) {
  inst.validate(lang);
  const Classification cls = classify_language(lang);
  const Operation needed = kind == TwoTermsKind::min ? Operation::min : Operation::max;
  if (!cls.has(needed)) throw InvalidArgument(std::string("language is not closed under ") + to_string(needed));
  const std::size_t n = inst.num_vars;
  const std::uint64_t count = truncated_candidate_count(n, d);
  if (count > opts.candidate_budget)
    throw BudgetExceeded("truncated basis needs " + std::to_string(count) + " candidates, budget is " +
                         std::to_string(opts.candidate_budget));

  const MonomialOrder ord = MonomialOrder::grlex();
  const Family fam = family_of(kind);
  const int shift = kind == TwoTermsKind::min ? 0 : 1;
  Solver solver(inst, lang, cls, opts.solver);

  TruncatedBasis out;
  out.basis.order = ord;
  out.basis.reduced = true;
  out.basis.truncated_at = d;
  out.basis.structure = fam;

  std::map<PartialAssignment::Bindings, std::optional<Assignment>> extension_cache;
  auto extends = [&](const PartialAssignment& a) -> const std::optional<Assignment>& {
    auto it = extension_cache.find(a.bindings());
    if (it == extension_cache.end()) it = extension_cache.emplace(a.bindings(), solver.solve(a)).first;
    return it->second;
  };
  auto member = [&](const Polynomial& p) {
    ++out.membership_tests;
    for (const auto& a : minimal_nonvanishing_assignments(p, kind))
      if (extends(a)) return false;
    return true;
  };

  if (!extends(PartialAssignment{})) {
    out.basis.polynomials = {Polynomial(1)};
    out.attestations.push_back({Polynomial(1), {PartialAssignment{}}});
    return out;
  }

  // Variable subsets of size <= d in ascending grlex of their products.
  std::vector<std::vector<Var>> subsets{{}};
  for (std::size_t size = 1; size <= std::min<std::size_t>(d, n); ++size) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
    std::vector<std::vector<Var>> level;
    do {
      std::vector<Var> s;
      for (std::size_t i = 0; i < n; ++i)
        if (pick[i]) s.push_back(static_cast<Var>(i + 1));
      level.push_back(std::move(s));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    // prev_permutation from the front-loaded mask yields descending lex; reverse for ascending
    std::reverse(level.begin(), level.end());
    for (auto& s : level) subsets.push_back(std::move(s));
  }

  std::vector<Polynomial> kept;
  std::vector<std::vector<Var>> kept_leads;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    const auto& s1 = subsets[i];
    bool pruned = std::any_of(kept_leads.begin(), kept_leads.end(),
                              [&](const std::vector<Var>& lead) { return contains_all(s1, lead); });
    if (pruned) continue;
    Polynomial lead = ShiftedProduct{Rational(1), s1, shift}.expand();
    std::optional<Polynomial> hit;
    ++out.candidates;
    if (member(lead)) hit = lead;
    for (std::size_t j = 0; j < i && !hit; ++j) {
      Polynomial tail = ShiftedProduct{Rational(1), subsets[j], shift}.expand();
      for (int alpha : {1, -1}) {
        Polynomial cand = lead + tail * Rational(alpha);
        ++out.candidates;
        if (member(cand)) {
          hit = cand;
          break;
        }
      }
    }
    if (hit) {
      kept.push_back(std::move(*hit));
      kept_leads.push_back(s1);
    }
  }
  if (d >= 2)
    for (Var v = 1; v <= n; ++v) kept.push_back(boolean_polynomial(v));

  GroebnerBasis raw;
  raw.order = ord;
  raw.polynomials = std::move(kept);
  GroebnerBasis reduced = autoreduce(raw);
  out.basis.polynomials = std::move(reduced.polynomials);
  for (const auto& g : out.basis.polynomials) {
    TwoTermsMembership m = two_terms_member(g, solver, kind);
    if (!m.member) throw Error("truncated basis member failed re-attestation: " + g.str());
    out.attestations.push_back({g, std::move(m.attestation)});
  }
  return out;
}

}  // namespace cspimp
