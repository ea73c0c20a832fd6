#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cspimp {

using Rational = mpq_class;
/// Variables are 1-based: x1, x2, ...
using Var = std::uint32_t;

class Monomial {
 public:
  using Entry = std::pair<Var, std::uint32_t>;

  Monomial() = default;
  /// Accepts unsorted entries; merges repeated variables and drops zero exponents.
  explicit Monomial(std::vector<Entry> entries);
  static Monomial variable(Var v, std::uint32_t exponent = 1);
  /// Product of the given distinct variables.
  static Monomial product(std::span<const Var> vars);

  const std::vector<Entry>& entries() const { return entries_; }
  std::uint32_t degree() const { return degree_; }
  std::uint32_t exponent(Var v) const;
  bool is_one() const { return entries_.empty(); }
  bool is_multilinear() const;
  bool divides(const Monomial& other) const;
  bool coprime(const Monomial& other) const;
  Var max_var() const { return entries_.empty() ? 0 : entries_.back().first; }
  std::vector<Var> variables() const;

  Monomial operator*(const Monomial& other) const;
  /// this / divisor; requires divisor.divides(*this).
  Monomial operator/(const Monomial& divisor) const;
  static Monomial lcm(const Monomial& a, const Monomial& b);
  /// Drops exponents above one.
  Monomial support() const;

  bool operator==(const Monomial& other) const = default;
  std::size_t hash() const;

 private:
  std::vector<Entry> entries_;  // sorted by variable, exponents > 0
  std::uint32_t degree_ = 0;
};

/// Default grlex with x1 > x2 > ... ; the canonical storage order of polynomials.
std::strong_ordering grlex_compare(const Monomial& a, const Monomial& b);

enum class OrderKind { grlex, lex };

class MonomialOrder {
 public:
  /// `priority` lists variables from highest to lowest; unlisted variables follow by index.
  explicit MonomialOrder(OrderKind kind = OrderKind::grlex, std::vector<Var> priority = {});
  static MonomialOrder grlex() { return MonomialOrder(OrderKind::grlex); }
  static MonomialOrder lex() { return MonomialOrder(OrderKind::lex); }

  OrderKind kind() const { return kind_; }
  const std::vector<Var>& priority() const { return priority_; }
  bool is_default_grlex() const { return kind_ == OrderKind::grlex && identity_; }

  std::strong_ordering compare(const Monomial& a, const Monomial& b) const;
  bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

 private:
  std::uint64_t rank(Var v) const;

  OrderKind kind_;
  std::vector<Var> priority_;
  std::vector<std::uint32_t> rank_;  // rank_[v] for listed variables, 0 = highest
  bool identity_ = true;
};

struct Term {
  Monomial monomial;
  Rational coeff;
};

class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT(google-explicit-constructor)
  Polynomial(long constant) : Polynomial(Rational(constant)) {}  // NOLINT
  Polynomial(int constant) : Polynomial(Rational(constant)) {}   // NOLINT
  Polynomial(Monomial m, Rational coeff);
  static Polynomial variable(Var v);
  /// x_v - shift
  static Polynomial shifted(Var v, int shift);
  static Polynomial from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::size_t size() const { return terms_.size(); }
  /// Terms in descending default grlex.
  const std::vector<Term>& terms() const { return terms_; }
  std::uint32_t degree() const;
  Var max_var() const;
  std::vector<Var> variables() const;
  Rational coefficient(const Monomial& m) const;
  Rational constant_term() const;

  /// Throws InvalidArgument "no leading term of zero".
  const Term& leading(const MonomialOrder& ord) const;
  const Monomial& leading_monomial(const MonomialOrder& ord) const { return leading(ord).monomial; }
  const Rational& leading_coeff(const MonomialOrder& ord) const { return leading(ord).coeff; }
  /// Scaled to leading coefficient one (zero stays zero).
  Polynomial monic(const MonomialOrder& ord) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial times(const Monomial& m, const Rational& c) const;

  bool operator==(const Polynomial& other) const;
  std::size_t hash() const;

  /// Canonical text: descending grlex, e.g. "x1*x2 - 1/2*x3 + 1".
  std::string str() const;

 private:
  std::vector<Term> terms_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial sub(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);
Polynomial scale(const Polynomial& p, const Rational& c);

/// Remainder modulo all x_i^2 - x_i.
Polynomial multilinearize(const Polynomial& p);
Polynomial boolean_polynomial(Var v);
bool is_boolean_polynomial(const Polynomial& p);

/// `point[v - 1]` is the value of x_v; throws when p mentions a variable beyond the point.
Rational evaluate(const Polynomial& p, std::span<const std::uint8_t> point);
Rational evaluate(const Polynomial& p, const std::map<Var, std::uint8_t>& point);

struct QuotientEntry {
  std::size_t divisor;
  Polynomial cofactor;
};

struct DivisionTranscript {
  std::vector<QuotientEntry> cofactors;  // one per divisor that was used, ascending index
  Polynomial remainder;
};

DivisionTranscript divide(const Polynomial& f, std::span<const Polynomial> divisors,
                          const MonomialOrder& ord);
/// Same remainder as divide(), without tracking cofactors.
Polynomial reduce(const Polynomial& f, std::span<const Polynomial> divisors,
                  const MonomialOrder& ord);
/// Re-expands sum cofactor * divisor + remainder.
Polynomial expand(const DivisionTranscript& t, std::span<const Polynomial> divisors);
bool is_reduced(const Polynomial& r, std::span<const Polynomial> divisors, const MonomialOrder& ord);

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& ord);

Polynomial parse_polynomial(const std::string& text);
std::string format_polynomial(const Polynomial& p);
std::string format_monomial(const Monomial& m);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};
struct PolynomialHash {
  std::size_t operator()(const Polynomial& p) const { return p.hash(); }
};

}  // namespace cspimp
