#pragma once

#include <optional>
#include <vector>

#include "cspimp/polynomial.hpp"

namespace cspimp {

/// coeff * prod_{v in vars} (x_v - shift), shift is 0 (positive term) or 1 (negative term).
struct ShiftedProduct {
  Rational coeff;
  std::vector<Var> vars;  // sorted, distinct
  int shift = 0;

  Polynomial expand() const;
  /// Leading monomial of the expansion (any order): the product of vars.
  Monomial top() const { return Monomial::product(vars); }
};

/// p = first + second; second.coeff may be zero.
struct TwoTermsForm {
  ShiftedProduct first;
  ShiftedProduct second;

  Polynomial expand() const { return first.expand() + second.expand(); }
};

enum class TwoTermsTag { PositiveTwoTerms, NegativeTwoTerms, Boolean, Quadratic, Linear, ZeroDegree, NotTwoTerms };

const char* to_string(TwoTermsTag tag);

struct TwoTermsClass {
  std::optional<TwoTermsForm> positive;
  std::optional<TwoTermsForm> negative;
  /// p = boolean_scale * (x_v^2 - x_v)
  std::optional<Var> boolean_var;
  Rational boolean_scale;
  /// p = scale * (x_i - a) * (x_j - b)
  struct QuadraticParts {
    Rational scale;
    Var i;
    int a;
    Var j;
    int b;
  };
  std::optional<QuadraticParts> quadratic;
  bool linear = false;
  bool zero_degree = false;

  bool has(TwoTermsTag tag) const;
  /// Every tag that applies, most specific first; {NotTwoTerms} when none.
  std::vector<TwoTermsTag> tags() const;
  TwoTermsTag tag() const { return tags().front(); }

  bool in_positive() const { return positive.has_value() || boolean_var.has_value(); }
  bool in_negative() const { return negative.has_value() || boolean_var.has_value(); }
  bool in_majority_sets() const { return boolean_var || quadratic || linear || zero_degree; }
};

TwoTermsClass classify_two_terms(const Polynomial& p);

/// Which reading of the leading term an interlacing decomposition uses.
enum class Family { positive, negative, majority };

struct Interlacing {
  Polynomial h;
  Polynomial f1;
  Polynomial f2;
  Polynomial g1;
  Polynomial g2;
};

/// f = h*f1 + f2, g = h*g1 + g2 with h built from the shared factors of the two leading terms.
/// Throws InvalidArgument "interlacing decomposition unavailable".
Interlacing decompose_interlacing(const Polynomial& f, const Polynomial& g, Family hint,
                                  const MonomialOrder& ord);
/// True when the decomposition satisfies the non-vanishing, leading-monomial and coprimality conditions.
bool interlacing_conditions_hold(const Polynomial& f, const Polynomial& g, const Interlacing& d,
                                 const MonomialOrder& ord);

struct InterlacedSPair {
  Polynomial sstar;
  Polynomial bf;
  Polynomial bg;
  Rational c;  // 1 / (LC(h) * LC(f1) * LC(g1))
  /// The undivided f2*g1 - f1*g2.
  Polynomial q;
};

/// S(f,g) = c*(bg*g + bf*f) + sstar, sstar the normal form of f2*g1 - f1*g2 modulo {f, g}, scaled by c.
InterlacedSPair interlaced_spair(const Polynomial& f, const Polynomial& g, const Interlacing& d,
                                 const MonomialOrder& ord);

}  // namespace cspimp
