#include "cspimp/csp.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "cspimp/error.hpp"

namespace cspimp {

// ------------------------------------------------------ PartialAssignment

PartialAssignment::PartialAssignment(std::initializer_list<std::pair<Var, int>> bindings) {
  for (const auto& [v, b] : bindings) bind(v, b != 0);
}

void PartialAssignment::bind(Var v, bool value) {
  if (v == 0) throw InvalidArgument("variable indices are 1-based");
  auto [it, inserted] = bindings_.emplace(v, value ? 1 : 0);
  if (!inserted && it->second != (value ? 1 : 0))
    throw InvalidArgument("conflicting binding for x" + std::to_string(v));
}

std::optional<bool> PartialAssignment::get(Var v) const {
  auto it = bindings_.find(v);
  if (it == bindings_.end()) return std::nullopt;
  return it->second != 0;
}

bool PartialAssignment::extended_by(const Assignment& a) const {
  for (const auto& [v, b] : bindings_)
    if (v > a.size() || a[v - 1] != b) return false;
  return true;
}

bool PartialAssignment::subset_of(const PartialAssignment& other) const {
  for (const auto& [v, b] : bindings_) {
    auto g = other.get(v);
    if (!g || static_cast<std::uint8_t>(*g) != b) return false;
  }
  return true;
}

std::string PartialAssignment::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [v, b] : bindings_) {
    if (!first) os << ", ";
    first = false;
    os << 'x' << v << '=' << int(b);
  }
  os << '}';
  return os.str();
}

// --------------------------------------------------------------- Relation

Relation::Relation(std::string name, std::size_t arity, const std::vector<std::vector<int>>& tuples)
    : name_(std::move(name)), arity_(arity) {
  if (arity > max_arity) throw InvalidArgument("relation arity above " + std::to_string(max_arity));
  for (const auto& t : tuples) {
    if (t.size() != arity)
      throw InvalidArgument("relation " + name_ + ": tuple length " + std::to_string(t.size()) +
                            " does not match arity " + std::to_string(arity));
    TupleMask m = 0;
    for (std::size_t j = 0; j < arity; ++j) {
      if (t[j] != 0 && t[j] != 1) throw InvalidArgument("relation " + name_ + ": tuple entries must be 0 or 1");
      if (t[j]) m |= TupleMask{1} << j;
    }
    masks_.push_back(m);
  }
  std::sort(masks_.begin(), masks_.end());
  masks_.erase(std::unique(masks_.begin(), masks_.end()), masks_.end());
}

Relation Relation::from_masks(std::string name, std::size_t arity, std::vector<TupleMask> masks) {
  if (arity > max_arity) throw InvalidArgument("relation arity above " + std::to_string(max_arity));
  Relation r;
  r.name_ = std::move(name);
  r.arity_ = arity;
  for (TupleMask m : masks)
    if (arity < 64 && (m >> arity) != 0) throw InvalidArgument("tuple mask exceeds arity");
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  r.masks_ = std::move(masks);
  return r;
}

std::vector<int> Relation::tuple(std::size_t i) const {
  std::vector<int> t(arity_);
  for (std::size_t j = 0; j < arity_; ++j) t[j] = static_cast<int>(masks_.at(i) >> j & 1);
  return t;
}

bool Relation::contains(TupleMask m) const { return std::binary_search(masks_.begin(), masks_.end(), m); }

bool Relation::contains(std::span<const std::uint8_t> values) const {
  if (values.size() != arity_) return false;
  TupleMask m = 0;
  for (std::size_t j = 0; j < arity_; ++j)
    if (values[j]) m |= TupleMask{1} << j;
  return contains(m);
}

// ---------------------------------------------------- ConstraintLanguage

ConstraintLanguage::ConstraintLanguage(std::vector<Relation> relations) {
  for (auto& r : relations) add(std::move(r));
}

void ConstraintLanguage::add(Relation r) {
  if (index_.count(r.name())) throw InvalidArgument("duplicate relation name " + r.name());
  index_.emplace(r.name(), relations_.size());
  relations_.push_back(std::move(r));
}

const Relation& ConstraintLanguage::add_if_absent(Relation r) {
  auto it = index_.find(r.name());
  if (it != index_.end()) return relations_[it->second];
  add(std::move(r));
  return relations_.back();
}

const Relation* ConstraintLanguage::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &relations_[it->second];
}

const Relation& ConstraintLanguage::at(const std::string& name) const {
  const Relation* r = find(name);
  if (!r) throw InvalidArgument("unknown relation " + name);
  return *r;
}

void CspInstance::validate(const ConstraintLanguage& lang) const {
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    const auto& con = constraints[c];
    const Relation& r = lang.at(con.relation);
    if (con.scope.size() != r.arity())
      throw InvalidArgument("constraint " + std::to_string(c) + ": scope length " + std::to_string(con.scope.size()) +
                            " does not match arity of " + r.name());
    for (Var v : con.scope)
      if (v == 0 || v > num_vars)
        throw InvalidArgument("constraint " + std::to_string(c) + ": variable index " + std::to_string(v) +
                              " outside 1.." + std::to_string(num_vars));
  }
}

bool satisfies(const CspInstance& inst, const ConstraintLanguage& lang, const Assignment& a) {
  if (a.size() != inst.num_vars) return false;
  for (const auto& con : inst.constraints) {
    const Relation& r = lang.at(con.relation);
    TupleMask m = 0;
    for (std::size_t j = 0; j < con.scope.size(); ++j)
      if (a[con.scope[j] - 1]) m |= TupleMask{1} << j;
    if (!r.contains(m)) return false;
  }
  return true;
}

// ---------------------------------------------------------- Polymorphisms

const char* to_string(Operation op) {
  switch (op) {
    case Operation::const0: return "const0";
    case Operation::const1: return "const1";
    case Operation::negation: return "negation";
    case Operation::min: return "Min";
    case Operation::max: return "Max";
    case Operation::majority: return "Majority";
    case Operation::minority: return "Minority";
  }
  return "?";
}

std::vector<Operation> Classification::operations() const {
  std::vector<Operation> out;
  for (Operation op : all_operations)
    if (has(op)) out.push_back(op);
  return out;
}

std::string Classification::str() const {
  switch (tractability) {
    case Tractability::majority: return "MajorityTract";
    case Tractability::min: return "MinTract";
    case Tractability::max: return "MaxTract";
    case Tractability::minority: return "MinorityTract";
    case Tractability::hard: return "Hard(" + std::to_string(hard_degree) + ")";
    case Tractability::open_imp1: return "OpenIMP1";
  }
  return "?";
}

bool check_polymorphism(const Relation& r, Operation op) {
  const auto& t = r.masks();
  const TupleMask full = r.arity() >= 64 ? ~TupleMask{0} : (TupleMask{1} << r.arity()) - 1;
  const std::size_t n = t.size();
  if (n == 0) return true;
  switch (op) {
    case Operation::const0: return r.contains(TupleMask{0});
    case Operation::const1: return r.contains(full);
    case Operation::negation:
      return std::all_of(t.begin(), t.end(), [&](TupleMask a) { return r.contains(~a & full); });
    case Operation::min:
    case Operation::max:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (!r.contains(op == Operation::min ? (t[i] & t[j]) : (t[i] | t[j]))) return false;
      return true;
    case Operation::majority:
    case Operation::minority:
      // Both operations are symmetric, so unordered triples with repetition suffice.
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
          for (std::size_t k = j; k < n; ++k) {
            TupleMask m = op == Operation::majority ? ((t[i] & t[j]) | (t[i] & t[k]) | (t[j] & t[k]))
                                                    : (t[i] ^ t[j] ^ t[k]);
            if (!r.contains(m)) return false;
          }
      return true;
  }
  return false;
}

namespace {

std::uint8_t relation_polymorphisms(const Relation& r) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::vector<TupleMask>>, std::uint8_t> cache;
  auto key = std::make_pair(r.arity(), r.masks());
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::uint8_t bits = 0;
  for (Operation op : all_operations)
    if (check_polymorphism(r, op)) bits |= std::uint8_t(1u << static_cast<int>(op));
  std::lock_guard lock(mu);
  cache.emplace(std::move(key), bits);
  return bits;
}

Classification classify_bits(std::uint8_t bits) {
  Classification c;
  c.polymorphisms = bits;
  if (c.has(Operation::majority)) {
    c.tractability = Tractability::majority;
  } else if (c.has(Operation::min)) {
    c.tractability = Tractability::min;
  } else if (c.has(Operation::max)) {
    c.tractability = Tractability::max;
  } else if (c.has(Operation::minority)) {
    c.tractability = Tractability::minority;
  } else {
    bool c0 = c.has(Operation::const0);
    bool c1 = c.has(Operation::const1);
    if (!c0 && !c1) {
      c.hard_degree = 0;
    } else if (c0 != c1) {
      c.hard_degree = 1;
    } else if (c.has(Operation::negation)) {
      c.hard_degree = 1;
    } else {
      c.tractability = Tractability::open_imp1;
      c.hard_degree = 2;
    }
  }
  return c;
}

}  // namespace

Classification classify_language(const ConstraintLanguage& lang) {
  std::uint8_t bits = 0x7f;
  for (const auto& r : lang.relations()) bits &= relation_polymorphisms(r);
  return classify_bits(bits);
}

Classification classify_instance(const CspInstance& inst, const ConstraintLanguage& lang) {
  std::uint8_t bits = 0x7f;
  for (const auto& con : inst.constraints) bits &= relation_polymorphisms(lang.at(con.relation));
  return classify_bits(bits);
}

}  // namespace cspimp
