#pragma once

// Independent reference computations for tests. Nothing here calls the engine's
// Groebner, encoder, solver or oracle code.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cspimp/csp.hpp"
#include "cspimp/polynomial.hpp"

namespace cspimp::testing {

inline Polynomial P(const std::string& s) { return parse_polynomial(s); }

inline std::vector<Polynomial> Ps(std::initializer_list<const char*> items) {
  std::vector<Polynomial> out;
  for (const char* s : items) out.push_back(P(s));
  return out;
}

/// Every point of {0,1}^n, x1 most significant.
inline std::vector<Assignment> cube(std::size_t n) {
  std::vector<Assignment> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    Assignment a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = (m >> (n - 1 - i)) & 1;
    out.push_back(a);
  }
  return out;
}

inline bool brute_satisfies(const CspInstance& inst, const ConstraintLanguage& lang, const Assignment& a) {
  for (const auto& c : inst.constraints) {
    const Relation& r = lang.at(c.relation);
    bool found = false;
    for (std::size_t t = 0; t < r.size() && !found; ++t) {
      std::vector<int> tuple = r.tuple(t);
      bool eq = true;
      for (std::size_t j = 0; j < tuple.size(); ++j) eq = eq && a[c.scope[j] - 1] == tuple[j];
      found = eq;
    }
    if (!found) return false;
  }
  return true;
}

inline std::vector<Assignment> brute_solutions(const CspInstance& inst, const ConstraintLanguage& lang) {
  std::vector<Assignment> out;
  for (auto& a : cube(inst.num_vars))
    if (brute_satisfies(inst, lang, a)) out.push_back(a);
  return out;
}

inline Rational brute_eval(const Polynomial& p, const Assignment& a) {
  Rational sum = 0;
  for (const auto& t : p.terms()) {
    Rational v = t.coeff;
    for (const auto& [var, e] : t.monomial.entries()) {
      (void)e;
      if (a[var - 1] == 0) v = 0;
    }
    sum += v;
  }
  return sum;
}

inline bool vanishes_on(const Polynomial& p, const std::vector<Assignment>& pts) {
  return std::all_of(pts.begin(), pts.end(), [&](const Assignment& a) { return brute_eval(p, a) == 0; });
}

/// Reduced grlex basis of the vanishing ideal of pts in {0,1}^n by linear algebra on evaluation
/// vectors: multilinear monomials in ascending grlex are either standard (independent of the
/// smaller standard ones on pts) or leading monomials; minimal ones give the basis members.
inline std::vector<Polynomial> vanishing_ideal_basis(std::size_t n, const std::vector<Assignment>& pts) {
  if (pts.empty()) return {Polynomial(1)};
  std::vector<std::vector<Var>> monos;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    std::vector<Var> s;
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1) s.push_back(static_cast<Var>(i + 1));
    monos.push_back(s);
  }
  std::sort(monos.begin(), monos.end(), [](const auto& a, const auto& b) {
    return grlex_compare(Monomial::product(a), Monomial::product(b)) < 0;
  });
  const std::size_t k = pts.size();
  auto vec_of = [&](const std::vector<Var>& s) {
    std::vector<Rational> v(k);
    for (std::size_t i = 0; i < k; ++i) {
      bool one = true;
      for (Var x : s) one = one && pts[i][x - 1] == 1;
      v[i] = one ? 1 : 0;
    }
    return v;
  };
  // Echelon rows: vector, pivot column, and the combination of standard monomials it represents.
  struct Row {
    std::vector<Rational> v;
    std::size_t pivot;
    std::map<std::size_t, Rational> combo;  // standard index -> coefficient
  };
  std::vector<Row> rows;
  std::vector<std::vector<Var>> standard;
  std::vector<std::vector<Var>> leads;
  std::vector<Polynomial> basis;
  for (const auto& s : monos) {
    bool divisible = std::any_of(leads.begin(), leads.end(), [&](const std::vector<Var>& l) {
      return std::includes(s.begin(), s.end(), l.begin(), l.end());
    });
    if (divisible) continue;
    std::vector<Rational> v = vec_of(s);
    std::map<std::size_t, Rational> combo;  // v_original = sum combo * standard + residual
    for (const Row& r : rows) {
      if (v[r.pivot] == 0) continue;
      Rational f = v[r.pivot] / r.v[r.pivot];
      for (std::size_t i = 0; i < k; ++i) v[i] -= f * r.v[i];
      for (const auto& [idx, c] : r.combo) combo[idx] += f * c;
    }
    auto nz = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
    if (nz == v.end()) {
      Polynomial g(Monomial::product(s), Rational(1));
      for (const auto& [idx, c] : combo)
        if (c != 0) g -= Polynomial(Monomial::product(standard[idx]), c);
      basis.push_back(g);
      leads.push_back(s);
      continue;
    }
    std::map<std::size_t, Rational> own;
    for (const auto& [idx, c] : combo)
      if (c != 0) own[idx] = -c;
    own[standard.size()] = 1;
    rows.push_back({v, static_cast<std::size_t>(nz - v.begin()), own});
    standard.push_back(s);
  }
  for (Var x = 1; x <= n; ++x) {
    bool is_lead = std::any_of(leads.begin(), leads.end(),
                               [&](const std::vector<Var>& l) { return l == std::vector<Var>{x}; });
    if (!is_lead) basis.push_back(P("x" + std::to_string(x) + "^2 - x" + std::to_string(x)));
  }
  std::sort(basis.begin(), basis.end(), [](const Polynomial& a, const Polynomial& b) {
    return grlex_compare(a.leading_monomial(MonomialOrder::grlex()), b.leading_monomial(MonomialOrder::grlex())) < 0;
  });
  return basis;
}

inline std::set<std::string> as_set(const std::vector<Polynomial>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(format_polynomial(p));
  return out;
}

/// Random polynomial with small integer coefficients over x1..xn, degree <= d.
inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t n, std::uint32_t d, std::size_t terms) {
  Polynomial p;
  for (std::size_t t = 0; t < terms; ++t) {
    std::vector<Monomial::Entry> e;
    const std::uint32_t deg = static_cast<std::uint32_t>(rng() % (d + 1));
    for (std::uint32_t i = 0; i < deg; ++i) e.push_back({static_cast<Var>(rng() % n + 1), 1});
    p += Polynomial(Monomial(e), Rational(static_cast<long>(rng() % 7) - 3));
  }
  return p;
}

/// Subset-minimal partial assignments on the support of p forcing p != 0, by exhaustion.
inline std::vector<PartialAssignment> brute_minimal_nonvanishing(const Polynomial& p) {
  const std::vector<Var> vars = p.variables();
  const std::size_t k = vars.size();
  std::vector<PartialAssignment> forcing;
  // each support variable is unbound (0), bound to 0 (1) or bound to 1 (2)
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 3;
  for (std::uint64_t code = 0; code < total; ++code) {
    PartialAssignment a;
    std::vector<Var> free;
    std::uint64_t c = code;
    for (std::size_t i = 0; i < k; ++i, c /= 3) {
      if (c % 3 == 0) free.push_back(vars[i]);
      if (c % 3 == 1) a.bind(vars[i], false);
      if (c % 3 == 2) a.bind(vars[i], true);
    }
    bool always = true;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << free.size()) && always; ++m) {
      std::map<Var, std::uint8_t> point(a.bindings().begin(), a.bindings().end());
      for (std::size_t i = 0; i < free.size(); ++i) point[free[i]] = m >> i & 1;
      Rational v = 0;
      for (const auto& t : p.terms()) {
        Rational tv = t.coeff;
        for (const auto& [var, e] : t.monomial.entries()) {
          (void)e;
          if (point[var] == 0) tv = 0;
        }
        v += tv;
      }
      always = v != 0;
    }
    if (always) forcing.push_back(a);
  }
  std::vector<PartialAssignment> out;
  for (const auto& a : forcing) {
    bool minimal = std::none_of(forcing.begin(), forcing.end(),
                                [&](const PartialAssignment& b) { return b.size() < a.size() && b.subset_of(a); });
    if (minimal) out.push_back(a);
  }
  return out;
}

inline std::set<std::string> partial_set(const std::vector<PartialAssignment>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(p.str());
  return out;
}

inline int apply_op(Operation op, int a, int b, int c) {
  switch (op) {
    case Operation::const0: return 0;
    case Operation::const1: return 1;
    case Operation::negation: return 1 - a;
    case Operation::min: return a & b;
    case Operation::max: return a | b;
    case Operation::majority: return (a & b) | (a & c) | (b & c);
    case Operation::minority: return a ^ b ^ c;
  }
  return 0;
}

inline int op_arity(Operation op) {
  switch (op) {
    case Operation::const0:
    case Operation::const1:
    case Operation::negation: return 1;
    case Operation::min:
    case Operation::max: return 2;
    default: return 3;
  }
}

/// Coordinate-wise image of tuples under op; tuples as bit masks over `arity` coordinates.
inline TupleMask apply_masks(Operation op, std::size_t arity, TupleMask a, TupleMask b, TupleMask c) {
  TupleMask out = 0;
  for (std::size_t j = 0; j < arity; ++j)
    out |= static_cast<TupleMask>(apply_op(op, a >> j & 1, b >> j & 1, c >> j & 1)) << j;
  return out;
}

inline bool brute_closed(const std::set<TupleMask>& r, std::size_t arity, Operation op) {
  if (r.empty()) return true;
  for (TupleMask a : r)
    for (TupleMask b : r)
      for (TupleMask c : r)
        if (!r.count(apply_masks(op, arity, a, b, c))) return false;
  return true;
}

/// Smallest superset of r closed under every op in ops.
inline std::set<TupleMask> close_under(std::set<TupleMask> r, std::size_t arity, const std::vector<Operation>& ops) {
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<TupleMask> cur(r.begin(), r.end());
    for (Operation op : ops)
      for (TupleMask a : cur)
        for (TupleMask b : cur)
          for (TupleMask c : cur) grew = r.insert(apply_masks(op, arity, a, b, c)).second || grew;
  }
  return r;
}

struct RandomCsp {
  CspInstance instance;
  ConstraintLanguage language;
};

/// m constraints of arity 1..max_arity over n variables, each relation a random tuple set closed under ops.
inline RandomCsp random_csp(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t max_arity,
                            const std::vector<Operation>& ops) {
  RandomCsp out;
  out.instance.num_vars = n;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t k = std::min<std::size_t>(n, 1 + rng() % max_arity);
    std::set<TupleMask> seed;
    const std::size_t picks = 1 + rng() % 3;
    for (std::size_t t = 0; t < picks; ++t) seed.insert(rng() % (TupleMask{1} << k));
    std::set<TupleMask> closed = close_under(seed, k, ops);
    std::string name = "r" + std::to_string(i);
    out.language.add(Relation::from_masks(name, k, std::vector<TupleMask>(closed.begin(), closed.end())));
    std::vector<Var> vars;
    for (Var v = 1; v <= n; ++v) vars.push_back(v);
    std::shuffle(vars.begin(), vars.end(), rng);
    vars.resize(k);
    out.instance.constraints.push_back({name, vars});
  }
  return out;
}

}  // namespace cspimp::testing
