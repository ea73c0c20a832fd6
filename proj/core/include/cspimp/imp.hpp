#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cspimp/csp.hpp"
#include "cspimp/groebner.hpp"
#include "cspimp/polynomial.hpp"

namespace cspimp {

struct ImpQuery {
  CspInstance instance;
  ConstraintLanguage language;
  Polynomial f;
  std::optional<std::uint32_t> degree_bound;
};

enum class Decision { in, not_in };
const char* to_string(Decision d);

enum class Pipeline { trivial, nullstellensatz, majority, min_truncated, max_truncated, sparse_min, sparse_max, oracle };
const char* to_string(Pipeline p);

enum class EvidenceKind {
  none,           // f = 0, or a NotIn verdict (the witness is the evidence)
  unsatisfiable,  // constant f and no solution extends the empty assignment
  syntactic,      // division transcript plus a derivation of the basis from the generators
  semantic,       // division transcript plus non-extendability attestations of the basis
  sparse,         // f as a combination of attested 2-terms members
  exhaustive      // oracle enumeration
};
const char* to_string(EvidenceKind k);

struct SparseStep {
  Rational weight;
  Polynomial member;
  std::vector<PartialAssignment> attestation;
};

struct MembershipVerdict {
  Decision decision = Decision::in;
  Pipeline pipeline = Pipeline::trivial;
  std::string note;
  EvidenceKind evidence = EvidenceKind::none;

  /// Divisors of the final division step.
  std::vector<Polynomial> basis;
  /// Min/Max only: f divided by the domain polynomials x1^2 - x1, ..., xn^2 - xn.
  std::optional<DivisionTranscript> domain_stage;
  DivisionTranscript transcript;
  /// Majority only: basis[i] is derivation->item(basis_items[i]).
  std::shared_ptr<const Derivation> derivation;
  std::vector<std::size_t> basis_items;
  /// Min/Max only: one per basis member.
  std::vector<SemanticAttestation> attestations;
  std::vector<SparseStep> sparse_steps;

  std::optional<Assignment> witness;

  // Sparse pipeline counters.
  std::size_t pair_tests = 0;
  std::size_t single_tests = 0;
  bool sparse_fallback = false;
};

struct ImpOptions {
  SolverOptions solver;
  BuchbergerOptions buchberger;
  TruncatedOptions truncated;
  std::size_t oracle_max_vars = 20;
};

/// Throws InvalidArgument on malformed queries, BudgetExceeded from the engines,
/// UnsupportedClass "class not supported at this size" when the oracle fallback is out of range.
MembershipVerdict decide(const ImpQuery& q, const ImpOptions& opts = {});

/// Pairing algorithm for sparse f over Min (kind min) or Max (kind max) closed languages.
MembershipVerdict decide_sparse(const ImpQuery& q, TwoTermsKind kind, const ImpOptions& opts = {});

/// A solution on which f is nonzero, or nullopt when f is in the ideal.
std::optional<Assignment> find_witness(const CspInstance& inst, const ConstraintLanguage& lang, const Polynomial& f,
                                       const ImpOptions& opts = {});

/// Independent re-check of a verdict against its query.
bool verify_evidence(const MembershipVerdict& v, const ImpQuery& q, const ImpOptions& opts = {});

// ----------------------------------------------------- hardness reductions

enum class HardnessCase { one_constant, two_constants, negation, nae_lifting };
const char* to_string(HardnessCase c);

struct HardnessSpec {
  HardnessCase kind = HardnessCase::two_constants;
  int constant = 0;  // one_constant only
};

/// Pinned variables are the scopes of unary singleton relations {(0)} and {(1)}.
/// one_constant(c) merges the (1-c)-pinned variables into one and asks f = x - c;
/// two_constants and negation merge both polarities and ask x_b(1 - x_a) and x_a - x_b;
/// nae_lifting maps not-all-equal constraints onto a 5-ary relation and asks y0 - y1.
/// In every case f is not in the ideal iff the base instance is satisfiable
/// (negation needs a negation-closed base language).
ImpQuery build_hardness_instance(const CspInstance& base, const ConstraintLanguage& lang, const HardnessSpec& spec);

/// The relation {0,1}^3 minus the two constant tuples.
Relation nae_relation();

}  // namespace cspimp
