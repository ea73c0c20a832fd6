#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cspimp/csp.hpp"
#include "cspimp/encoder.hpp"
#include "cspimp/polynomial.hpp"
#include "cspimp/solver.hpp"
#include "cspimp/two_terms.hpp"

namespace cspimp {

enum class Strategy { generic, majority, twoterms };
const char* to_string(Strategy s);

struct DerivationStep {
  Polynomial result;
  std::vector<std::pair<std::size_t, Polynomial>> combination;  // (item index, cofactor)
};

/// A straight-line proof of ideal membership. Items 0 .. generators.size()-1 are the original
/// generators; step i is item generators.size() + i and is a combination of earlier items.
struct Derivation {
  std::vector<Polynomial> generators;
  std::vector<DerivationStep> steps;

  std::size_t size() const { return generators.size() + steps.size(); }
  const Polynomial& item(std::size_t i) const;
  /// Re-expands every step exactly.
  bool verify() const;
};

struct GroebnerBasis {
  std::vector<Polynomial> polynomials;
  MonomialOrder order;
  bool reduced = false;
  std::optional<std::uint32_t> truncated_at;
  std::optional<Family> structure;
  /// When present, polynomials[i] is derivation->item(derivation_index[i]).
  std::shared_ptr<const Derivation> derivation;
  std::vector<std::size_t> derivation_index;
};

struct BuchbergerStats {
  std::size_t insertions = 0;
  std::size_t pairs_processed = 0;
  std::size_t coprime_skips = 0;
  std::size_t structured_fallbacks = 0;
  bool structure_preserved = true;
};

struct BuchbergerOptions {
  std::size_t basis_limit = 5000;
  /// Pick pending pairs in a seeded random order instead of FIFO.
  std::optional<std::uint64_t> shuffle_seed;
  bool track_derivation = false;
  std::function<void(const Polynomial&)> on_insert;
  BuchbergerStats* stats = nullptr;
};

/// Throws InvalidArgument on a strategy/provenance mismatch, BudgetExceeded "basis budget exceeded".
GroebnerBasis buchberger(const GeneratorSet& gens, const MonomialOrder& ord, Strategy strategy,
                         const BuchbergerOptions& opts = {});

/// Minimal, monic, tail-reduced basis sorted by ascending leading monomial.
GroebnerBasis autoreduce(const GroebnerBasis& g);

bool is_groebner(std::span<const Polynomial> g, const MonomialOrder& ord);
/// Monic members, and no monomial of any member lies in the leading-term ideal of the others.
bool is_reduced(std::span<const Polynomial> g, const MonomialOrder& ord);

/// Lex basis with the first m priority variables greatest; keeps members free of them.
GeneratorSet elimination_ideal(const GeneratorSet& gens, std::size_t m, const std::vector<Var>& priority,
                               const BuchbergerOptions& opts = {});

// ----------------------------------------------------- Min/Max machinery

enum class TwoTermsKind { min, max };
inline Family family_of(TwoTermsKind k) { return k == TwoTermsKind::min ? Family::positive : Family::negative; }

/// Minimal partial assignments on the support of p forcing p != 0 under every extension.
/// Empty for Boolean polynomials. Throws InvalidArgument when p is outside the 2-terms class.
std::vector<PartialAssignment> minimal_nonvanishing_assignments(const Polynomial& p, TwoTermsKind kind);

struct TwoTermsMembership {
  bool member = false;
  /// On membership: the minimal non-vanishing assignments, none of which extends.
  std::vector<PartialAssignment> attestation;
  /// On non-membership: a solution on which p is nonzero.
  std::optional<Assignment> witness;
};

TwoTermsMembership two_terms_member(const Polynomial& p, const Solver& solver, TwoTermsKind kind);
TwoTermsMembership two_terms_member(const Polynomial& p, const CspInstance& inst, const ConstraintLanguage& lang,
                                    TwoTermsKind kind);

struct SemanticAttestation {
  Polynomial polynomial;
  std::vector<PartialAssignment> nonvanishing;
};

struct TruncatedOptions {
  std::uint64_t candidate_budget = 2'000'000;
  SolverOptions solver;
};

struct TruncatedBasis {
  GroebnerBasis basis;
  /// One per basis polynomial, same order.
  std::vector<SemanticAttestation> attestations;
  std::uint64_t candidates = 0;
  std::uint64_t membership_tests = 0;
};

/// Degree-<= d slice of the reduced grlex basis. Throws BudgetExceeded when the candidate count
/// exceeds the budget.
TruncatedBasis truncated_basis(const CspInstance& inst, const ConstraintLanguage& lang, TwoTermsKind kind,
                               std::uint32_t d, const TruncatedOptions& opts = {});
std::uint64_t truncated_candidate_count(std::size_t n, std::uint32_t d);

}  // namespace cspimp
