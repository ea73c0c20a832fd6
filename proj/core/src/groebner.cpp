#include "cspimp/groebner.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>

#include "cspimp/error.hpp"

namespace cspimp {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::generic: return "generic";
    case Strategy::majority: return "majority";
    case Strategy::twoterms: return "twoterms";
  }
  return "?";
}

const Polynomial& Derivation::item(std::size_t i) const {
  if (i < generators.size()) return generators[i];
  return steps.at(i - generators.size()).result;
}

bool Derivation::verify() const {
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const std::size_t self = generators.size() + s;
    Polynomial sum;
    for (const auto& [idx, cof] : steps[s].combination) {
      if (idx >= self) return false;
      sum += cof * item(idx);
    }
    if (!(sum == steps[s].result)) return false;
  }
  return true;
}

namespace {

using Combination = std::map<std::size_t, Polynomial>;

void accumulate(Combination& c, std::size_t idx, const Polynomial& p) {
  if (p.is_zero()) return;
  auto [it, inserted] = c.try_emplace(idx, p);
  if (!inserted) it->second += p;
}

std::size_t record(Derivation& d, const Polynomial& result, const Combination& c, const Rational& scale) {
  DerivationStep step;
  step.result = result;
  for (const auto& [idx, cof] : c)
    if (!cof.is_zero()) step.combination.emplace_back(idx, cof * scale);
  d.steps.push_back(std::move(step));
  return d.generators.size() + d.steps.size() - 1;
}

/// Terms c * tau(S) of one family, used by the structured reduction.
struct FamilyTerm {
  Rational coeff;
  std::vector<Var> vars;
};

std::vector<Var> set_union(const std::vector<Var>& a, const std::vector<Var>& b) {
  std::vector<Var> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::size_t intersection_size(const std::vector<Var>& a, const std::vector<Var>& b) {
  std::vector<Var> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out.size();
}

std::vector<Var> set_minus(const std::vector<Var>& a, const std::vector<Var>& b) {
  std::vector<Var> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Reduction data of a basis member in family form: lead * tau(lead_vars) + tail * tau(tail_vars).
struct ReducerForm {
  Rational lead;
  std::vector<Var> lead_vars;
  Rational tail;
  std::vector<Var> tail_vars;
};

std::optional<ReducerForm> reducer_form(const Polynomial& g, Family fam, const MonomialOrder& ord) {
  TwoTermsClass cls = classify_two_terms(g);
  const auto& form = fam == Family::positive ? cls.positive : cls.negative;
  if (!form || cls.boolean_var) return std::nullopt;
  const ShiftedProduct* a = &form->first;
  const ShiftedProduct* b = &form->second;
  if (b->coeff != 0 && ord.greater(b->top(), a->top())) std::swap(a, b);
  return ReducerForm{a->coeff, a->vars, b->coeff, b->vars};
}

/// Whole-term reduction inside one 2-terms family; every step keeps the polynomial in the family.
std::optional<Polynomial> structured_reduce(const Polynomial& p, const std::vector<Polynomial>& basis,
                                            const std::vector<std::optional<ReducerForm>>& forms, Family fam,
                                            const MonomialOrder& ord) {
  TwoTermsClass cls = classify_two_terms(p);
  const auto& form = fam == Family::positive ? cls.positive : cls.negative;
  if (!form) return std::nullopt;
  const int shift = fam == Family::positive ? 0 : 1;
  std::vector<FamilyTerm> terms;
  for (const ShiftedProduct* sp : {&form->first, &form->second})
    if (sp->coeff != 0) terms.push_back({sp->coeff, sp->vars});

  auto add_term = [&](FamilyTerm t) {
    if (t.coeff == 0) return;
    for (auto it = terms.begin(); it != terms.end(); ++it) {
      if (it->vars == t.vars) {
        it->coeff += t.coeff;
        if (it->coeff == 0) terms.erase(it);
        return;
      }
    }
    terms.push_back(std::move(t));
  };

  while (true) {
    std::sort(terms.begin(), terms.end(), [&](const FamilyTerm& a, const FamilyTerm& b) {
      return ord.greater(Monomial::product(a.vars), Monomial::product(b.vars));
    });
    bool reduced = false;
    for (std::size_t t = 0; t < terms.size() && !reduced; ++t) {
      Monomial m = Monomial::product(terms[t].vars);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        if (!forms[k]) continue;
        if (!Monomial::product(forms[k]->lead_vars).divides(m)) continue;
        FamilyTerm old = terms[t];
        terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(t));
        const ReducerForm& g = *forms[k];
        if (g.tail != 0) {
          std::vector<Var> rest = set_minus(old.vars, g.lead_vars);
          Rational c = -old.coeff * g.tail / g.lead;
          if (shift == 1 && intersection_size(rest, g.tail_vars) % 2 == 1) c = -c;
          add_term({c, set_union(rest, g.tail_vars)});
        }
        reduced = true;
        break;
      }
    }
    if (!reduced) break;
  }
  Polynomial out;
  for (const auto& t : terms) out += ShiftedProduct{t.coeff, t.vars, shift}.expand();
  return out;
}

}  // namespace

GroebnerBasis buchberger(const GeneratorSet& gens, const MonomialOrder& ord, Strategy strategy,
                         const BuchbergerOptions& opts) {
  Family fam = Family::majority;
  if (strategy == Strategy::majority) {
    if (gens.provenance != Provenance::majority)
      throw InvalidArgument("majority strategy needs majority-encoded generators");
    if (!gens.includes_domain) throw InvalidArgument("majority strategy needs the domain polynomials");
  } else if (strategy == Strategy::twoterms) {
    if (gens.provenance == Provenance::min) {
      fam = Family::positive;
    } else if (gens.provenance == Provenance::max) {
      fam = Family::negative;
    } else {
      throw InvalidArgument("twoterms strategy needs min- or max-encoded generators");
    }
    if (opts.track_derivation) throw InvalidArgument("derivations are recorded for generic and majority runs only");
  }
  BuchbergerStats local_stats;
  BuchbergerStats& stats = opts.stats ? *opts.stats : local_stats;
  stats = BuchbergerStats{};

  const bool track = opts.track_derivation;
  std::shared_ptr<Derivation> deriv;
  if (track) {
    deriv = std::make_shared<Derivation>();
    deriv->generators = gens.polynomials;
  }

  GroebnerBasis out;
  out.order = ord;
  if (strategy == Strategy::majority) out.structure = Family::majority;
  if (strategy == Strategy::twoterms) out.structure = fam;

  std::vector<Polynomial>& G = out.polynomials;
  std::vector<std::size_t>& items = out.derivation_index;
  for (std::size_t i = 0; i < gens.polynomials.size(); ++i) {
    const Polynomial& p = gens.polynomials[i];
    if (p.is_zero()) continue;
    if (p.is_constant()) {
      G.assign(1, Polynomial(1));
      items.clear();
      if (track) {
        Combination c;
        c[i] = Polynomial(1);
        items.push_back(record(*deriv, G[0], c, Rational(1 / p.constant_term())));
      }
      out.derivation = deriv;
      return out;
    }
    G.push_back(p);
    items.push_back(i);
  }

  std::vector<Polynomial> booleans;
  std::vector<std::size_t> boolean_items;
  if (strategy == Strategy::majority) {
    std::map<Var, std::size_t> where;
    for (std::size_t i = 0; i < gens.polynomials.size(); ++i)
      if (is_boolean_polynomial(gens.polynomials[i])) where.emplace(gens.polynomials[i].variables()[0], i);
    for (Var v = 1; v <= gens.num_vars; ++v) {
      auto it = where.find(v);
      if (it == where.end()) throw InvalidArgument("majority strategy needs x_i^2 - x_i for every variable");
      booleans.push_back(boolean_polynomial(v));
      boolean_items.push_back(it->second);
    }
  }

  std::vector<std::optional<ReducerForm>> forms;
  auto structure_ok = [&](const Polynomial& p) {
    if (strategy == Strategy::generic) return true;
    TwoTermsClass cls = classify_two_terms(p);
    if (strategy == Strategy::majority) return cls.in_majority_sets();
    return fam == Family::positive ? cls.in_positive() : cls.in_negative();
  };
  if (strategy == Strategy::twoterms)
    for (const auto& g : G) forms.push_back(reducer_form(g, fam, ord));
  for (const auto& g : G)
    if (!structure_ok(g)) stats.structure_preserved = false;

  std::vector<std::pair<std::size_t, std::size_t>> pending;
  std::size_t head = 0;
  for (std::size_t j = 0; j < G.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pending.emplace_back(i, j);
  std::mt19937_64 rng(opts.shuffle_seed.value_or(0));

  while (head < pending.size()) {
    std::pair<std::size_t, std::size_t> pr;
    if (opts.shuffle_seed) {
      std::uniform_int_distribution<std::size_t> pick(head, pending.size() - 1);
      std::swap(pending[head], pending[pick(rng)]);
    }
    pr = pending[head++];
    ++stats.pairs_processed;
    const Polynomial f = G[pr.first];
    const Polynomial g = G[pr.second];
    const Term& lf = f.leading(ord);
    const Term& lg = g.leading(ord);
    if (lf.monomial.coprime(lg.monomial)) {
      ++stats.coprime_skips;
      continue;
    }
    Monomial l = Monomial::lcm(lf.monomial, lg.monomial);
    Polynomial cof_f(l / lf.monomial, Rational(1 / lf.coeff));
    Polynomial cof_g(l / lg.monomial, Rational(-1 / lg.coeff));

    Combination combo;
    Polynomial r;
    auto reduce_by_basis = [&](const Polynomial& p) {
      if (!track) return reduce(p, G, ord);
      DivisionTranscript t = divide(p, G, ord);
      for (const auto& q : t.cofactors) accumulate(combo, items[q.divisor], -q.cofactor);
      return t.remainder;
    };
    auto generic_step = [&]() {
      if (track) {
        accumulate(combo, items[pr.first], cof_f);
        accumulate(combo, items[pr.second], cof_g);
      }
      return reduce_by_basis(cof_f * f + cof_g * g);
    };

    if (strategy == Strategy::generic) {
      r = generic_step();
    } else if (strategy == Strategy::majority) {
      std::optional<InterlacedSPair> sp;
      try {
        sp = interlaced_spair(f, g, decompose_interlacing(f, g, Family::majority, ord), ord);
      } catch (const InvalidArgument&) {
        ++stats.structured_fallbacks;
      }
      if (!sp) {
        r = generic_step();
      } else {
        Polynomial ml;
        if (track) {
          accumulate(combo, items[pr.first], cof_f - sp->bf * sp->c);
          accumulate(combo, items[pr.second], cof_g - sp->bg * sp->c);
          DivisionTranscript t = divide(sp->sstar, booleans, ord);
          for (const auto& q : t.cofactors) accumulate(combo, boolean_items[q.divisor], -q.cofactor);
          ml = t.remainder;
        } else {
          ml = multilinearize(sp->sstar);
        }
        r = reduce_by_basis(ml);
      }
    } else {
      std::optional<Polynomial> sr;
      try {
        Interlacing d = decompose_interlacing(f, g, fam, ord);
        Polynomial q = multilinearize(d.f2 * d.g1 - d.f1 * d.g2);
        sr = structured_reduce(q, G, forms, fam, ord);
      } catch (const InvalidArgument&) {
      }
      if (!sr) {
        ++stats.structured_fallbacks;
        r = generic_step();
      } else {
        r = reduce(*sr, G, ord);
      }
    }

    if (r.is_zero()) continue;
    if (G.size() >= opts.basis_limit) throw BudgetExceeded("basis budget exceeded");
    const Rational lc = r.leading_coeff(ord);
    Polynomial h = r * Rational(1 / lc);
    if (!structure_ok(h)) stats.structure_preserved = false;
    ++stats.insertions;
    if (opts.on_insert) opts.on_insert(h);
    const std::size_t k = G.size();
    G.push_back(h);
    if (track) items.push_back(record(*deriv, h, combo, Rational(1 / lc)));
    if (strategy == Strategy::twoterms) forms.push_back(reducer_form(h, fam, ord));
    if (h.is_constant()) break;
    for (std::size_t i = 0; i < k; ++i) pending.emplace_back(i, k);
  }
  if (!track) items.clear();
  out.derivation = deriv;
  return out;
}

GroebnerBasis autoreduce(const GroebnerBasis& in) {
  const MonomialOrder& ord = in.order;
  const bool track = in.derivation != nullptr;
  std::shared_ptr<Derivation> deriv = track ? std::make_shared<Derivation>(*in.derivation) : nullptr;

  GroebnerBasis out;
  out.order = ord;
  out.reduced = true;
  out.truncated_at = in.truncated_at;
  out.structure = in.structure;
  out.derivation = deriv;

  struct Entry {
    Polynomial p;
    std::size_t item;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < in.polynomials.size(); ++i) {
    const Polynomial& p = in.polynomials[i];
    if (p.is_zero()) continue;
    std::size_t item = track ? in.derivation_index.at(i) : 0;
    if (p.is_constant()) {
      out.polynomials.assign(1, Polynomial(1));
      if (track) {
        Combination c;
        c[item] = Polynomial(1);
        out.derivation_index.assign(1, p == Polynomial(1) ? item : record(*deriv, Polynomial(1), c,
                                                                         Rational(1 / p.constant_term())));
      }
      return out;
    }
    entries.push_back({p, item});
  }
  std::stable_sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
    return ord.less(a.p.leading_monomial(ord), b.p.leading_monomial(ord));
  });
  std::vector<Entry> kept;
  for (auto& e : entries) {
    const Monomial& lm = e.p.leading_monomial(ord);
    bool divisible = std::any_of(kept.begin(), kept.end(),
                                 [&](const Entry& k) { return k.p.leading_monomial(ord).divides(lm); });
    if (!divisible) kept.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < kept.size(); ++i) {
    std::vector<Polynomial> others;
    std::vector<std::size_t> other_items;
    for (std::size_t j = 0; j < kept.size(); ++j) {
      if (j == i) continue;
      others.push_back(kept[j].p);
      other_items.push_back(kept[j].item);
    }
    DivisionTranscript t = track ? divide(kept[i].p, others, ord) : DivisionTranscript{{}, reduce(kept[i].p, others, ord)};
    const Rational lc = t.remainder.leading_coeff(ord);
    Polynomial h = t.remainder * Rational(1 / lc);
    if (h == kept[i].p) continue;
    if (track) {
      Combination c;
      c[kept[i].item] = Polynomial(1);
      for (const auto& q : t.cofactors) accumulate(c, other_items[q.divisor], -q.cofactor);
      kept[i].item = record(*deriv, h, c, Rational(1 / lc));
    }
    kept[i].p = std::move(h);
  }
  for (auto& e : kept) {
    out.polynomials.push_back(std::move(e.p));
    if (track) out.derivation_index.push_back(e.item);
  }
  return out;
}

bool is_groebner(std::span<const Polynomial> g, const MonomialOrder& ord) {
  std::vector<Polynomial> basis;
  for (const auto& p : g)
    if (!p.is_zero()) basis.push_back(p);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (!reduce(s_polynomial(basis[i], basis[j], ord), basis, ord).is_zero()) return false;
  return true;
}

bool is_reduced(std::span<const Polynomial> g, const MonomialOrder& ord) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].is_zero() || g[i].leading_coeff(ord) != 1) return false;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      const Monomial& lm = g[j].leading_monomial(ord);
      for (const auto& t : g[i].terms())
        if (lm.divides(t.monomial)) return false;
    }
  }
  return true;
}

GeneratorSet elimination_ideal(const GeneratorSet& gens, std::size_t m, const std::vector<Var>& priority,
                               const BuchbergerOptions& opts) {
  if (m > priority.size() || m > gens.num_vars)
    throw InvalidArgument("cannot eliminate more variables than the priority lists");
  MonomialOrder ord(OrderKind::lex, priority);
  GeneratorSet plain = gens;
  plain.provenance = Provenance::generic;
  GroebnerBasis reduced = autoreduce(buchberger(plain, ord, Strategy::generic, opts));
  std::vector<Var> eliminated(priority.begin(), priority.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(eliminated.begin(), eliminated.end());
  GeneratorSet out;
  out.num_vars = gens.num_vars;
  out.provenance = Provenance::generic;
  out.includes_domain = gens.includes_domain;
  for (const auto& p : reduced.polynomials) {
    std::vector<Var> vars = p.variables();
    bool clean = std::none_of(vars.begin(), vars.end(),
                              [&](Var v) { return std::binary_search(eliminated.begin(), eliminated.end(), v); });
    if (clean) out.polynomials.push_back(p);
  }
  return out;
}

}  // namespace cspimp
