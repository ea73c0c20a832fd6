#include <algorithm>
#include <numeric>

#include "cspimp/error.hpp"
#include "cspimp/imp.hpp"

namespace cspimp {

const char* to_string(HardnessCase c) {
  switch (c) {
    case HardnessCase::one_constant: return "one_constant";
    case HardnessCase::two_constants: return "two_constants";
    case HardnessCase::negation: return "negation";
    case HardnessCase::nae_lifting: return "nae_lifting";
  }
  return "?";
}

Relation nae_relation() {
  std::vector<TupleMask> masks;
  for (TupleMask m = 1; m < 7; ++m) masks.push_back(m);
  return Relation::from_masks("nae", 3, masks);
}

namespace {

/// 0 or 1 for the unary singleton relations, -1 otherwise.
int pinned_value(const Relation& r) {
  if (r.arity() != 1 || r.size() != 1) return -1;
  return static_cast<int>(r.masks().front());
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

ImpQuery lift_nae(const CspInstance& base, const ConstraintLanguage& lang) {
  const Relation nae = nae_relation();
  std::vector<TupleMask> masks;
  // coordinates 4 and 5 carry y0 = 0 and y1 = 1
  for (TupleMask m : nae.masks()) masks.push_back(m | TupleMask{1} << 4);
  masks.push_back(0);
  masks.push_back(0b11111);
  ImpQuery q;
  q.language.add(Relation::from_masks("nae_lift", 5, masks));
  const Var y0 = static_cast<Var>(base.num_vars + 1);
  const Var y1 = static_cast<Var>(base.num_vars + 2);
  q.instance.num_vars = base.num_vars + 2;
  for (const auto& con : base.constraints) {
    if (!lang.at(con.relation).same_tuples(nae))
      throw InvalidArgument("nae lifting needs a base instance over the not-all-equal relation only");
    q.instance.constraints.push_back({"nae_lift", {con.scope[0], con.scope[1], con.scope[2], y0, y1}});
  }
  q.f = Polynomial::variable(y0) - Polynomial::variable(y1);
  q.degree_bound = 1;
  return q;
}

}  // namespace

ImpQuery build_hardness_instance(const CspInstance& base, const ConstraintLanguage& lang, const HardnessSpec& spec) {
  base.validate(lang);
  if (spec.kind == HardnessCase::nae_lifting) return lift_nae(base, lang);
  if (spec.kind == HardnessCase::one_constant && spec.constant != 0 && spec.constant != 1)
    throw InvalidArgument("constant must be 0 or 1");

  // Which pins are merged away: only the 1-c pins for one_constant, both polarities otherwise.
  auto merged = [&](int value) {
    return value >= 0 && (spec.kind != HardnessCase::one_constant || value == 1 - spec.constant);
  };
  const std::size_t n = base.num_vars;
  UnionFind uf(n + 1);
  Var first[2] = {0, 0};
  for (const auto& con : base.constraints) {
    const int value = pinned_value(lang.at(con.relation));
    if (!merged(value)) continue;
    const Var v = con.scope[0];
    if (first[value] == 0) {
      first[value] = v;
    } else {
      uf.unite(first[value], v);
    }
  }
  if (spec.kind == HardnessCase::one_constant) {
    if (first[1 - spec.constant] == 0)
      throw InvalidArgument("no variable is pinned to " + std::to_string(1 - spec.constant));
  } else if (first[0] == 0 || first[1] == 0) {
    throw InvalidArgument("the base instance needs variables pinned to both 0 and 1");
  }

  // Compact renumbering of the class representatives.
  std::vector<Var> rename(n + 1, 0);
  Var next = 0;
  for (Var v = 1; v <= n; ++v)
    if (uf.find(v) == v) rename[v] = ++next;
  auto image = [&](Var v) { return rename[uf.find(v)]; };

  ImpQuery q;
  q.instance.num_vars = next;
  for (const auto& con : base.constraints) {
    const Relation& r = lang.at(con.relation);
    if (merged(pinned_value(r))) continue;
    Constraint c{con.relation, {}};
    for (Var v : con.scope) c.scope.push_back(image(v));
    q.instance.constraints.push_back(std::move(c));
    if (!q.language.find(r.name())) q.language.add(r);
  }

  switch (spec.kind) {
    case HardnessCase::one_constant: {
      const Var x = image(first[1 - spec.constant]);
      q.f = Polynomial::variable(x) - Polynomial(spec.constant);
      q.degree_bound = 1;
      break;
    }
    case HardnessCase::two_constants: {
      const Polynomial xa = Polynomial::variable(image(first[0]));
      const Polynomial xb = Polynomial::variable(image(first[1]));
      q.f = xb * (Polynomial(1) - xa);
      q.degree_bound = 2;
      break;
    }
    case HardnessCase::negation: {
      q.f = Polynomial::variable(image(first[0])) - Polynomial::variable(image(first[1]));
      q.degree_bound = 1;
      break;
    }
    case HardnessCase::nae_lifting: break;
  }
  return q;
}

}  // namespace cspimp
