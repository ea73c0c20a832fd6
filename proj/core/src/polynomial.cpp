#include "cspimp/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "cspimp/error.hpp"

namespace cspimp {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

template <class Entries>
std::strong_ordering lex_walk(const Entries& a, const Entries& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      if (a[i].second != b[j].second) return a[i].second <=> b[j].second;
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      return std::strong_ordering::greater;
    } else {
      return std::strong_ordering::less;
    }
  }
  if (i < a.size()) return std::strong_ordering::greater;
  if (j < b.size()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

struct DescendingGrlex {
  bool operator()(const Term& a, const Term& b) const {
    return grlex_compare(a.monomial, b.monomial) > 0;
  }
};

void canonicalize(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(), DescendingGrlex{});
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    Rational c = terms[i].coeff;
    while (j < terms.size() && terms[j].monomial == terms[i].monomial) c += terms[j++].coeff;
    if (c != 0) {
      if (out != i) terms[out].monomial = std::move(terms[i].monomial);
      terms[out].coeff = c;
      ++out;
    }
    i = j;
  }
  terms.resize(out);
}

std::vector<Term> merge_add(const std::vector<Term>& a, const std::vector<Term>& b, bool negate_b) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    std::strong_ordering c = std::strong_ordering::equal;
    if (i == a.size()) {
      c = std::strong_ordering::less;
    } else if (j == b.size()) {
      c = std::strong_ordering::greater;
    } else {
      c = grlex_compare(a[i].monomial, b[j].monomial);
    }
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(b[j]);
      if (negate_b) out.back().coeff = -out.back().coeff;
      ++j;
    } else {
      Rational s = negate_b ? Rational(a[i].coeff - b[j].coeff) : Rational(a[i].coeff + b[j].coeff);
      if (s != 0) out.push_back(Term{a[i].monomial, s});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  for (const auto& [v, e] : entries) {
    if (v == 0) throw InvalidArgument("variable indices are 1-based");
    if (e == 0) continue;
    if (!entries_.empty() && entries_.back().first == v) {
      entries_.back().second += e;
    } else {
      entries_.emplace_back(v, e);
    }
    degree_ += e;
  }
}

Monomial Monomial::variable(Var v, std::uint32_t exponent) { return Monomial({{v, exponent}}); }

Monomial Monomial::product(std::span<const Var> vars) {
  std::vector<Entry> e;
  e.reserve(vars.size());
  for (Var v : vars) e.emplace_back(v, 1);
  return Monomial(std::move(e));
}

std::uint32_t Monomial::exponent(Var v) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{v, 0});
  return (it != entries_.end() && it->first == v) ? it->second : 0;
}

bool Monomial::is_multilinear() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.second == 1; });
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  std::size_t j = 0;
  for (const auto& [v, e] : entries_) {
    while (j < other.entries_.size() && other.entries_[j].first < v) ++j;
    if (j == other.entries_.size() || other.entries_[j].first != v || other.entries_[j].second < e)
      return false;
  }
  return true;
}

bool Monomial::coprime(const Monomial& other) const {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < entries_.size() && j < other.entries_.size()) {
    if (entries_[i].first == other.entries_[j].first) return false;
    if (entries_[i].first < other.entries_[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return true;
}

std::vector<Var> Monomial::variables() const {
  std::vector<Var> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.entries_.reserve(entries_.size() + other.entries_.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < entries_.size() || j < other.entries_.size()) {
    if (j == other.entries_.size() || (i < entries_.size() && entries_[i].first < other.entries_[j].first)) {
      out.entries_.push_back(entries_[i++]);
    } else if (i == entries_.size() || other.entries_[j].first < entries_[i].first) {
      out.entries_.push_back(other.entries_[j++]);
    } else {
      out.entries_.emplace_back(entries_[i].first, entries_[i].second + other.entries_[j].second);
      ++i;
      ++j;
    }
  }
  out.degree_ = degree_ + other.degree_;
  return out;
}

Monomial Monomial::operator/(const Monomial& divisor) const {
  Monomial out;
  std::size_t j = 0;
  for (const auto& [v, e] : entries_) {
    std::uint32_t d = 0;
    if (j < divisor.entries_.size() && divisor.entries_[j].first == v) d = divisor.entries_[j++].second;
    if (d > e) throw InvalidArgument("monomial does not divide");
    if (e > d) out.entries_.emplace_back(v, e - d);
  }
  if (j != divisor.entries_.size()) throw InvalidArgument("monomial does not divide");
  out.degree_ = degree_ - divisor.degree_;
  return out;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  Monomial out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.entries_.size() || j < b.entries_.size()) {
    if (j == b.entries_.size() || (i < a.entries_.size() && a.entries_[i].first < b.entries_[j].first)) {
      out.entries_.push_back(a.entries_[i++]);
    } else if (i == a.entries_.size() || b.entries_[j].first < a.entries_[i].first) {
      out.entries_.push_back(b.entries_[j++]);
    } else {
      out.entries_.emplace_back(a.entries_[i].first, std::max(a.entries_[i].second, b.entries_[j].second));
      ++i;
      ++j;
    }
    out.degree_ += out.entries_.back().second;
  }
  return out;
}

Monomial Monomial::support() const {
  Monomial out;
  out.entries_.reserve(entries_.size());
  for (const auto& e : entries_) out.entries_.emplace_back(e.first, 1);
  out.degree_ = static_cast<std::uint32_t>(entries_.size());
  return out;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x51ed27;
  for (const auto& [v, e] : entries_) h = mix(mix(h, v), e);
  return h;
}

std::strong_ordering grlex_compare(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  return lex_walk(a.entries(), b.entries());
}

// ---------------------------------------------------------- MonomialOrder

MonomialOrder::MonomialOrder(OrderKind kind, std::vector<Var> priority)
    : kind_(kind), priority_(std::move(priority)) {
  Var top = 0;
  for (Var v : priority_) {
    if (v == 0) throw InvalidArgument("variable indices are 1-based");
    top = std::max(top, v);
  }
  rank_.assign(top + 1, UINT32_MAX);
  for (std::size_t i = 0; i < priority_.size(); ++i) {
    if (rank_[priority_[i]] != UINT32_MAX) throw InvalidArgument("priority repeats a variable");
    rank_[priority_[i]] = static_cast<std::uint32_t>(i);
    if (priority_[i] != i + 1) identity_ = false;
  }
}

std::uint64_t MonomialOrder::rank(Var v) const {
  if (v < rank_.size() && rank_[v] != UINT32_MAX) return rank_[v];
  return priority_.size() + static_cast<std::uint64_t>(v);
}

std::strong_ordering MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  if (kind_ == OrderKind::grlex && a.degree() != b.degree()) return a.degree() <=> b.degree();
  if (identity_) return lex_walk(a.entries(), b.entries());
  using Ranked = std::vector<std::pair<std::uint64_t, std::uint32_t>>;
  auto ranked = [this](const Monomial& m) {
    Ranked r;
    r.reserve(m.entries().size());
    for (const auto& [v, e] : m.entries()) r.emplace_back(rank(v), e);
    std::sort(r.begin(), r.end());
    return r;
  };
  return lex_walk(ranked(a), ranked(b));
}

// ------------------------------------------------------------- Polynomial

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) terms_.push_back(Term{Monomial(), constant});
}

Polynomial::Polynomial(Monomial m, Rational coeff) {
  if (coeff != 0) terms_.push_back(Term{std::move(m), std::move(coeff)});
}

Polynomial Polynomial::variable(Var v) { return Polynomial(Monomial::variable(v), 1); }

Polynomial Polynomial::shifted(Var v, int shift) { return variable(v) - Polynomial(shift); }

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  Polynomial p;
  canonicalize(terms);
  p.terms_ = std::move(terms);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one());
}

std::uint32_t Polynomial::degree() const { return terms_.empty() ? 0 : terms_.front().monomial.degree(); }

Var Polynomial::max_var() const {
  Var m = 0;
  for (const auto& t : terms_) m = std::max(m, t.monomial.max_var());
  return m;
}

std::vector<Var> Polynomial::variables() const {
  std::vector<Var> out;
  for (const auto& t : terms_)
    for (const auto& e : t.monomial.entries()) out.push_back(e.first);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, const Monomial& key) {
    return grlex_compare(t.monomial, key) > 0;
  });
  if (it != terms_.end() && it->monomial == m) return it->coeff;
  return 0;
}

Rational Polynomial::constant_term() const {
  if (!terms_.empty() && terms_.back().monomial.is_one()) return terms_.back().coeff;
  return 0;
}

const Term& Polynomial::leading(const MonomialOrder& ord) const {
  if (terms_.empty()) throw InvalidArgument("no leading term of zero");
  if (ord.is_default_grlex()) return terms_.front();
  const Term* best = &terms_.front();
  for (std::size_t i = 1; i < terms_.size(); ++i)
    if (ord.greater(terms_[i].monomial, best->monomial)) best = &terms_[i];
  return *best;
}

Polynomial Polynomial::monic(const MonomialOrder& ord) const {
  if (is_zero()) return *this;
  const Rational& lc = leading(ord).coeff;
  if (lc == 1) return *this;
  return *this * Rational(1 / lc);
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.is_zero()) return *this;
  terms_ = merge_add(terms_, other.terms_, false);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.is_zero()) return *this;
  terms_ = merge_add(terms_, other.terms_, true);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  if (b.size() == 1) return a.times(b.terms_[0].monomial, b.terms_[0].coeff);
  if (a.size() == 1) return b.times(a.terms_[0].monomial, a.terms_[0].coeff);
  std::vector<Term> out;
  out.reserve(a.size() * b.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) out.push_back(Term{s.monomial * t.monomial, s.coeff * t.coeff});
  return Polynomial::from_terms(std::move(out));
}

Polynomial& Polynomial::operator*=(const Polynomial& other) { return *this = *this * other; }

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else if (c != 1) {
    for (auto& t : terms_) t.coeff *= c;
  }
  return *this;
}

Polynomial Polynomial::times(const Monomial& m, const Rational& c) const {
  Polynomial out;
  if (c == 0) return out;
  out.terms_.reserve(terms_.size());
  // Multiplying by a monomial preserves the grlex order of the terms.
  for (const auto& t : terms_) out.terms_.push_back(Term{t.monomial * m, t.coeff * c});
  return out;
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].monomial == other.terms_[i].monomial) || terms_[i].coeff != other.terms_[i].coeff)
      return false;
  return true;
}

std::size_t Polynomial::hash() const {
  std::size_t h = 0x7f4a;
  for (const auto& t : terms_) {
    h = mix(h, t.monomial.hash());
    h = mix(h, std::hash<std::string>{}(t.coeff.get_str()));
  }
  return h;
}

std::string Polynomial::str() const { return format_polynomial(*this); }

Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
Polynomial sub(const Polynomial& p, const Polynomial& q) { return p - q; }
Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }
Polynomial scale(const Polynomial& p, const Rational& c) { return p * c; }

Polynomial multilinearize(const Polynomial& p) {
  bool already = std::all_of(p.terms().begin(), p.terms().end(),
                             [](const Term& t) { return t.monomial.is_multilinear(); });
  if (already) return p;
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) out.push_back(Term{t.monomial.support(), t.coeff});
  return Polynomial::from_terms(std::move(out));
}

Polynomial boolean_polynomial(Var v) {
  return Polynomial(Monomial::variable(v, 2), 1) - Polynomial::variable(v);
}

bool is_boolean_polynomial(const Polynomial& p) {
  if (p.size() != 2) return false;
  const Term& a = p.terms()[0];
  const Term& b = p.terms()[1];
  if (a.monomial.entries().size() != 1 || a.monomial.degree() != 2) return false;
  Var v = a.monomial.entries()[0].first;
  return b.monomial == Monomial::variable(v) && a.coeff == -b.coeff;
}

Rational evaluate(const Polynomial& p, std::span<const std::uint8_t> point) {
  Rational sum = 0;
  for (const auto& t : p.terms()) {
    bool nonzero = true;
    for (const auto& [v, e] : t.monomial.entries()) {
      if (v > point.size()) throw InvalidArgument("assignment misses variable x" + std::to_string(v));
      if (point[v - 1] == 0) nonzero = false;
    }
    if (nonzero) sum += t.coeff;
  }
  return sum;
}

Rational evaluate(const Polynomial& p, const std::map<Var, std::uint8_t>& point) {
  Rational sum = 0;
  for (const auto& t : p.terms()) {
    bool nonzero = true;
    for (const auto& [v, e] : t.monomial.entries()) {
      auto it = point.find(v);
      if (it == point.end()) throw InvalidArgument("assignment misses variable x" + std::to_string(v));
      if (it->second == 0) nonzero = false;
    }
    if (nonzero) sum += t.coeff;
  }
  return sum;
}

// --------------------------------------------------------------- Division

namespace {

struct OrderLess {
  const MonomialOrder* ord;
  bool operator()(const Monomial& a, const Monomial& b) const { return ord->less(a, b); }
};

using Working = std::map<Monomial, Rational, OrderLess>;

void subtract_multiple(Working& w, const Polynomial& g, const Monomial& m, const Rational& c) {
  for (const auto& t : g.terms()) {
    Monomial key = t.monomial * m;
    auto [it, inserted] = w.try_emplace(std::move(key), 0);
    it->second -= c * t.coeff;
    if (it->second == 0) w.erase(it);
  }
}

template <bool Track>
DivisionTranscript divide_impl(const Polynomial& f, std::span<const Polynomial> divisors,
                               const MonomialOrder& ord) {
  std::vector<const Term*> leads;
  leads.reserve(divisors.size());
  for (const auto& g : divisors) {
    if (g.is_zero()) throw InvalidArgument("zero divisor in division");
    leads.push_back(&g.leading(ord));
  }
  Working w{OrderLess{&ord}};
  for (const auto& t : f.terms()) w.emplace(t.monomial, t.coeff);
  std::vector<std::vector<Term>> quotients(Track ? divisors.size() : 0);
  std::vector<Term> remainder;
  while (!w.empty()) {
    auto top = std::prev(w.end());
    std::size_t hit = divisors.size();
    for (std::size_t i = 0; i < leads.size(); ++i) {
      if (leads[i]->monomial.divides(top->first)) {
        hit = i;
        break;
      }
    }
    if (hit == divisors.size()) {
      remainder.push_back(Term{top->first, top->second});
      w.erase(top);
      continue;
    }
    Monomial m = top->first / leads[hit]->monomial;
    Rational c = top->second / leads[hit]->coeff;
    if constexpr (Track) quotients[hit].push_back(Term{m, c});
    subtract_multiple(w, divisors[hit], m, c);
  }
  DivisionTranscript out;
  out.remainder = Polynomial::from_terms(std::move(remainder));
  if constexpr (Track) {
    for (std::size_t i = 0; i < quotients.size(); ++i) {
      if (quotients[i].empty()) continue;
      out.cofactors.push_back(QuotientEntry{i, Polynomial::from_terms(std::move(quotients[i]))});
    }
  }
  return out;
}

}  // namespace

DivisionTranscript divide(const Polynomial& f, std::span<const Polynomial> divisors,
                          const MonomialOrder& ord) {
  return divide_impl<true>(f, divisors, ord);
}

Polynomial reduce(const Polynomial& f, std::span<const Polynomial> divisors, const MonomialOrder& ord) {
  return divide_impl<false>(f, divisors, ord).remainder;
}

Polynomial expand(const DivisionTranscript& t, std::span<const Polynomial> divisors) {
  Polynomial sum = t.remainder;
  for (const auto& q : t.cofactors) {
    if (q.divisor >= divisors.size()) throw InvalidArgument("transcript names a missing divisor");
    sum += q.cofactor * divisors[q.divisor];
  }
  return sum;
}

bool is_reduced(const Polynomial& r, std::span<const Polynomial> divisors, const MonomialOrder& ord) {
  for (const auto& g : divisors) {
    if (g.is_zero()) continue;
    const Monomial& lm = g.leading_monomial(ord);
    for (const auto& t : r.terms())
      if (lm.divides(t.monomial)) return false;
  }
  return true;
}

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& ord) {
  if (f.is_zero() || g.is_zero()) throw InvalidArgument("S-polynomial of zero");
  const Term& lf = f.leading(ord);
  const Term& lg = g.leading(ord);
  Monomial l = Monomial::lcm(lf.monomial, lg.monomial);
  return f.times(l / lf.monomial, Rational(1 / lf.coeff)) - g.times(l / lg.monomial, Rational(1 / lg.coeff));
}

}  // namespace cspimp
