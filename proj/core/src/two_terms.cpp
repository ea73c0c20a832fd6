#include "cspimp/two_terms.hpp"

#include <algorithm>
#include <array>

#include "cspimp/error.hpp"

namespace cspimp {

Polynomial ShiftedProduct::expand() const {
  if (coeff == 0) return Polynomial();
  if (shift == 0) return Polynomial(top(), coeff);
  // prod (x_v - 1) = sum over subsets T of (-1)^{|vars \ T|} prod_T x
  std::vector<Term> terms;
  const std::size_t k = vars.size();
  if (k > 30) throw InvalidArgument("negative term too large to expand");
  terms.reserve(std::size_t{1} << k);
  std::vector<Var> chosen;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    chosen.clear();
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) chosen.push_back(vars[i]);
    bool odd = (k - chosen.size()) % 2 == 1;
    terms.push_back(Term{Monomial::product(chosen), odd ? Rational(-coeff) : coeff});
  }
  return Polynomial::from_terms(std::move(terms));
}

const char* to_string(TwoTermsTag tag) {
  switch (tag) {
    case TwoTermsTag::PositiveTwoTerms: return "PositiveTwoTerms";
    case TwoTermsTag::NegativeTwoTerms: return "NegativeTwoTerms";
    case TwoTermsTag::Boolean: return "Boolean";
    case TwoTermsTag::Quadratic: return "Quadratic";
    case TwoTermsTag::Linear: return "Linear";
    case TwoTermsTag::ZeroDegree: return "ZeroDegree";
    case TwoTermsTag::NotTwoTerms: return "NotTwoTerms";
  }
  return "?";
}

bool TwoTermsClass::has(TwoTermsTag t) const {
  switch (t) {
    case TwoTermsTag::PositiveTwoTerms: return in_positive();
    case TwoTermsTag::NegativeTwoTerms: return in_negative();
    case TwoTermsTag::Boolean: return boolean_var.has_value();
    case TwoTermsTag::Quadratic: return quadratic.has_value();
    case TwoTermsTag::Linear: return linear;
    case TwoTermsTag::ZeroDegree: return zero_degree;
    case TwoTermsTag::NotTwoTerms: return !in_positive() && !in_negative() && !in_majority_sets();
  }
  return false;
}

std::vector<TwoTermsTag> TwoTermsClass::tags() const {
  std::vector<TwoTermsTag> out;
  for (auto t : {TwoTermsTag::Boolean, TwoTermsTag::Quadratic, TwoTermsTag::Linear, TwoTermsTag::ZeroDegree,
                 TwoTermsTag::PositiveTwoTerms, TwoTermsTag::NegativeTwoTerms})
    if (has(t)) out.push_back(t);
  if (out.empty()) out.push_back(TwoTermsTag::NotTwoTerms);
  return out;
}

namespace {

std::optional<TwoTermsForm> positive_form(const Polynomial& p) {
  if (p.size() > 2) return std::nullopt;
  TwoTermsForm form;
  form.first.coeff = 0;
  form.second.coeff = 0;
  ShiftedProduct* slot[2] = {&form.first, &form.second};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Term& t = p.terms()[i];
    if (!t.monomial.is_multilinear()) return std::nullopt;
    slot[i]->coeff = t.coeff;
    slot[i]->vars = t.monomial.variables();
  }
  return form;
}

std::optional<TwoTermsForm> negative_form(const Polynomial& p) {
  if (p.is_zero()) {
    TwoTermsForm form;
    form.first = ShiftedProduct{0, {}, 1};
    form.second = ShiftedProduct{0, {}, 1};
    return form;
  }
  const std::uint32_t d = p.degree();
  if (d > 24) return std::nullopt;
  if (p.size() > (std::size_t{2} << d)) return std::nullopt;
  for (const auto& t : p.terms())
    if (!t.monomial.is_multilinear()) return std::nullopt;
  TwoTermsForm form;
  const Term& top = p.terms().front();
  form.first = ShiftedProduct{top.coeff, top.monomial.variables(), 1};
  Polynomial rest = p - form.first.expand();
  if (rest.is_zero()) {
    form.second = ShiftedProduct{0, {}, 1};
    return form;
  }
  const Term& next = rest.terms().front();
  form.second = ShiftedProduct{next.coeff, next.monomial.variables(), 1};
  if (!(rest == form.second.expand())) return std::nullopt;
  return form;
}

bool proportional(const std::array<Rational, 3>& v, const std::array<int, 3>& w) {
  Rational s = 0;
  for (int k = 0; k < 3; ++k) {
    if (w[k] != 0) {
      s = v[k] / w[k];
      break;
    }
  }
  if (s == 0) return false;
  for (int k = 0; k < 3; ++k)
    if (v[k] != s * w[k]) return false;
  return true;
}

bool is_linear_set_member(const Polynomial& p) {
  if (p.degree() != 1) return false;
  std::vector<Var> vars = p.variables();
  if (vars.size() > 2) return false;
  Rational a = p.coefficient(Monomial::variable(vars[0]));
  Rational b = vars.size() > 1 ? p.coefficient(Monomial::variable(vars[1])) : Rational(0);
  Rational c = p.constant_term();
  for (int bits = 0; bits < 16; ++bits) {
    int alpha = bits & 1;
    int beta = bits >> 1 & 1;
    int gamma = bits >> 2 & 1;
    int delta = bits >> 3 & 1;
    std::array<int, 3> w{delta - beta, gamma - alpha, alpha * beta - gamma * delta};
    if (proportional({a, b, c}, w) || proportional({b, a, c}, w)) return true;
  }
  return false;
}

std::optional<TwoTermsClass::QuadraticParts> quadratic_parts(const Polynomial& p) {
  if (p.degree() != 2 || p.size() > 4) return std::nullopt;
  const Term& top = p.terms().front();
  if (top.monomial.entries().size() != 2) return std::nullopt;
  Var i = top.monomial.entries()[0].first;
  Var j = top.monomial.entries()[1].first;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Polynomial cand = Polynomial::shifted(i, a) * Polynomial::shifted(j, b) * top.coeff;
      if (cand == p) return TwoTermsClass::QuadraticParts{top.coeff, i, a, j, b};
    }
  }
  return std::nullopt;
}

}  // namespace

TwoTermsClass classify_two_terms(const Polynomial& p) {
  TwoTermsClass cls;
  if (is_boolean_polynomial(p)) {
    cls.boolean_var = p.terms()[1].monomial.entries()[0].first;
    cls.boolean_scale = p.terms()[0].coeff;
    return cls;
  }
  cls.positive = positive_form(p);
  cls.negative = negative_form(p);
  cls.quadratic = quadratic_parts(p);
  cls.linear = is_linear_set_member(p);
  cls.zero_degree = p.is_constant() && !p.is_zero();
  return cls;
}

// ------------------------------------------------------------- Interlacing

namespace {

struct TopSplit {
  Rational coeff;
  std::vector<std::pair<Var, int>> factors;  // (x_v - shift)
  Polynomial tail;
};

[[noreturn]] void unavailable() { throw InvalidArgument("interlacing decomposition unavailable"); }

Polynomial factor_product(const std::vector<std::pair<Var, int>>& factors) {
  Polynomial out(1);
  for (const auto& [v, s] : factors) out *= Polynomial::shifted(v, s);
  return out;
}

TopSplit split_from_form(const Polynomial& p, const TwoTermsForm& form, const MonomialOrder& ord) {
  const ShiftedProduct* top = &form.first;
  const ShiftedProduct* other = &form.second;
  if (other->coeff != 0 && ord.greater(other->top(), top->top())) std::swap(top, other);
  TopSplit s;
  s.coeff = top->coeff;
  for (Var v : top->vars) s.factors.emplace_back(v, top->shift);
  s.tail = other->expand();
  (void)p;
  return s;
}

TopSplit split_top(const Polynomial& p, Family family, const MonomialOrder& ord) {
  if (p.is_zero()) unavailable();
  TwoTermsClass cls = classify_two_terms(p);
  if (cls.boolean_var) {
    TopSplit s;
    s.coeff = cls.boolean_scale;
    s.factors = {{*cls.boolean_var, 0}, {*cls.boolean_var, 1}};
    return s;
  }
  switch (family) {
    case Family::positive:
      if (cls.positive) return split_from_form(p, *cls.positive, ord);
      break;
    case Family::negative:
      if (cls.negative) return split_from_form(p, *cls.negative, ord);
      break;
    case Family::majority: {
      TopSplit s;
      if (cls.quadratic) {
        s.coeff = cls.quadratic->scale;
        s.factors = {{cls.quadratic->i, cls.quadratic->a}, {cls.quadratic->j, cls.quadratic->b}};
        return s;
      }
      if (cls.linear) {
        const Term& lt = p.leading(ord);
        s.coeff = lt.coeff;
        s.factors = {{lt.monomial.entries()[0].first, 0}};
        s.tail = p - Polynomial(lt.monomial, lt.coeff);
        return s;
      }
      if (cls.zero_degree) {
        s.coeff = p.constant_term();
        return s;
      }
      break;
    }
  }
  unavailable();
}

}  // namespace

bool interlacing_conditions_hold(const Polynomial& f, const Polynomial& g, const Interlacing& d,
                                 const MonomialOrder& ord) {
  Polynomial hf1 = d.h * d.f1;
  Polynomial hg1 = d.h * d.g1;
  if (hf1.is_zero() || hg1.is_zero()) return false;
  if (!(hf1 + d.f2 == f) || !(hg1 + d.g2 == g)) return false;
  if (!d.f2.is_zero() && !ord.greater(hf1.leading_monomial(ord), d.f2.leading_monomial(ord))) return false;
  if (!d.g2.is_zero() && !ord.greater(hg1.leading_monomial(ord), d.g2.leading_monomial(ord))) return false;
  return d.f1.leading_monomial(ord).coprime(d.g1.leading_monomial(ord));
}

Interlacing decompose_interlacing(const Polynomial& f, const Polynomial& g, Family hint,
                                  const MonomialOrder& ord) {
  TopSplit fs = split_top(f, hint, ord);
  TopSplit gs = split_top(g, hint, ord);

  std::vector<std::pair<Var, int>> shared;
  auto take = [](std::vector<std::pair<Var, int>>& list, Var v, int s) {
    auto it = std::find(list.begin(), list.end(), std::make_pair(v, s));
    if (it == list.end()) return false;
    list.erase(it);
    return true;
  };
  // Identical factors first.
  for (std::size_t i = 0; i < fs.factors.size();) {
    auto fac = fs.factors[i];
    if (take(gs.factors, fac.first, fac.second)) {
      shared.push_back(fac);
      fs.factors.erase(fs.factors.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  // Same variable, different shift: rewrite f's factor as (x - s') + (s' - s).
  for (std::size_t i = 0; i < fs.factors.size();) {
    auto [v, s] = fs.factors[i];
    auto it = std::find_if(gs.factors.begin(), gs.factors.end(), [v = v](const auto& e) { return e.first == v; });
    if (it == gs.factors.end()) {
      ++i;
      continue;
    }
    int target = it->second;
    gs.factors.erase(it);
    fs.factors.erase(fs.factors.begin() + static_cast<std::ptrdiff_t>(i));
    std::vector<std::pair<Var, int>> rest = shared;
    rest.insert(rest.end(), fs.factors.begin(), fs.factors.end());
    fs.tail += factor_product(rest) * Rational(fs.coeff * (target - s));
    shared.emplace_back(v, target);
  }

  Interlacing d;
  d.h = factor_product(shared);
  d.f1 = factor_product(fs.factors) * fs.coeff;
  d.g1 = factor_product(gs.factors) * gs.coeff;
  d.f2 = fs.tail;
  d.g2 = gs.tail;
  if (!interlacing_conditions_hold(f, g, d, ord)) unavailable();
  return d;
}

InterlacedSPair interlaced_spair(const Polynomial& f, const Polynomial& g, const Interlacing& d,
                                 const MonomialOrder& ord) {
  InterlacedSPair out;
  out.q = d.f2 * d.g1 - d.f1 * d.g2;
  std::array<Polynomial, 2> fg{f, g};
  DivisionTranscript t = divide(out.q, fg, ord);
  Polynomial af;
  Polynomial ag;
  for (const auto& e : t.cofactors) (e.divisor == 0 ? af : ag) = e.cofactor;
  out.c = 1 / (d.h.leading_coeff(ord) * d.f1.leading_coeff(ord) * d.g1.leading_coeff(ord));
  out.sstar = t.remainder * out.c;
  const Term& lf1 = d.f1.leading(ord);
  const Term& lg1 = d.g1.leading(ord);
  out.bf = Polynomial(lg1.monomial, lg1.coeff) - d.g1 + af;
  out.bg = d.f1 - Polynomial(lf1.monomial, lf1.coeff) + ag;
  return out;
}

}  // namespace cspimp
