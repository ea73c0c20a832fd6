#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cspimp/polynomial.hpp"

namespace cspimp {

/// Full 0/1 assignment; entry v - 1 is the value of x_v.
using Assignment = std::vector<std::uint8_t>;

class PartialAssignment {
 public:
  using Bindings = std::map<Var, std::uint8_t>;

  PartialAssignment() = default;
  PartialAssignment(std::initializer_list<std::pair<Var, int>> bindings);

  /// Throws InvalidArgument when v is already bound to the other value.
  void bind(Var v, bool value);
  std::optional<bool> get(Var v) const;
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const Bindings& bindings() const { return bindings_; }
  bool extended_by(const Assignment& a) const;
  /// Every binding of *this also appears in other.
  bool subset_of(const PartialAssignment& other) const;
  bool operator==(const PartialAssignment& other) const = default;
  std::string str() const;

 private:
  Bindings bindings_;
};

/// Bit j of a tuple mask is coordinate j + 1.
using TupleMask = std::uint64_t;

class Relation {
 public:
  static constexpr std::size_t max_arity = 24;

  Relation() = default;
  Relation(std::string name, std::size_t arity, const std::vector<std::vector<int>>& tuples);
  static Relation from_masks(std::string name, std::size_t arity, std::vector<TupleMask> masks);

  const std::string& name() const { return name_; }
  std::size_t arity() const { return arity_; }
  std::size_t size() const { return masks_.size(); }
  bool empty() const { return masks_.empty(); }
  const std::vector<TupleMask>& masks() const { return masks_; }
  std::vector<int> tuple(std::size_t i) const;
  bool contains(TupleMask m) const;
  bool contains(std::span<const std::uint8_t> values) const;
  /// Same arity and tuple set; names are ignored.
  bool same_tuples(const Relation& other) const { return arity_ == other.arity_ && masks_ == other.masks_; }

 private:
  std::string name_;
  std::size_t arity_ = 0;
  std::vector<TupleMask> masks_;  // sorted, unique
};

class ConstraintLanguage {
 public:
  ConstraintLanguage() = default;
  explicit ConstraintLanguage(std::vector<Relation> relations);

  /// Throws on a duplicate name.
  void add(Relation r);
  /// Adds r unless a relation of that name exists; returns the stored relation.
  const Relation& add_if_absent(Relation r);
  const Relation* find(const std::string& name) const;
  const Relation& at(const std::string& name) const;
  const std::vector<Relation>& relations() const { return relations_; }
  std::size_t size() const { return relations_.size(); }

 private:
  std::vector<Relation> relations_;
  std::map<std::string, std::size_t> index_;
};

struct Constraint {
  std::string relation;
  std::vector<Var> scope;
};

struct CspInstance {
  std::size_t num_vars = 0;
  std::vector<Constraint> constraints;

  /// Checks relation names, scope lengths and 1-based indices.
  void validate(const ConstraintLanguage& lang) const;
};

bool satisfies(const CspInstance& inst, const ConstraintLanguage& lang, const Assignment& a);

enum class Operation : std::uint8_t { const0, const1, negation, min, max, majority, minority };
inline constexpr Operation all_operations[] = {Operation::const0, Operation::const1, Operation::negation,
                                               Operation::min,    Operation::max,    Operation::majority,
                                               Operation::minority};
const char* to_string(Operation op);

enum class Tractability { majority, min, max, minority, hard, open_imp1 };

struct Classification {
  std::uint8_t polymorphisms = 0;  // bit per Operation
  Tractability tractability = Tractability::hard;
  /// Degree at which IMP is coNP-complete for hard classes (2 for open_imp1), else -1.
  int hard_degree = -1;

  bool has(Operation op) const { return polymorphisms >> static_cast<int>(op) & 1; }
  std::vector<Operation> operations() const;
  /// "MajorityTract", "MinTract", "MaxTract", "MinorityTract", "Hard(d)", "OpenIMP1".
  std::string str() const;
};

bool check_polymorphism(const Relation& r, Operation op);
Classification classify_language(const ConstraintLanguage& lang);
/// Classification of the relations actually used by the instance.
Classification classify_instance(const CspInstance& inst, const ConstraintLanguage& lang);

}  // namespace cspimp
