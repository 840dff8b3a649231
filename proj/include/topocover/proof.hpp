#ifndef TOPOCOVER_PROOF_HPP
#define TOPOCOVER_PROOF_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "topocover/axioms.hpp"
#include "topocover/element.hpp"
#include "topocover/subset.hpp"

namespace topo {

class CoverProof;
using ProofPtr = std::shared_ptr<const CoverProof>;

/// A finite derivation of a cover judgement, built from the two rules:
/// refl(a) covers a by membership, inf(a, i, ks) covers a because every
/// element of children(a, i) is covered by the aligned subproof.
///
/// Membership evidence is not stored; subsets are decidable and the
/// checker recomputes it. Children are aligned positionally with the
/// provider's sorted child list, which keeps certificates compact and
/// unambiguous. Nodes are immutable and shared, so a derivation over a
/// graph with shared substructure stays small in memory even when its
/// unfolding as a tree is large.
class CoverProof {
 public:
  enum class Rule { Refl, Inf };

  static ProofPtr refl(Element a);
  static ProofPtr inf(Element a, std::size_t index,
                      std::vector<ProofPtr> children);

  Rule rule() const { return rule_; }
  const Element& element() const { return element_; }
  std::size_t index() const { return index_; }
  const std::vector<ProofPtr>& children() const { return children_; }

  /// Height of the derivation; a leaf has height 1.
  std::size_t height() const { return height_; }

  /// Node count of the derivation read as a tree (shared subproofs
  /// counted once per occurrence), saturating at the uint64 maximum.
  std::uint64_t unfolded_size() const { return unfolded_size_; }

 private:
  CoverProof() = default;

  Rule rule_ = Rule::Refl;
  Element element_;
  std::size_t index_ = 0;
  std::vector<ProofPtr> children_;
  std::size_t height_ = 1;
  std::uint64_t unfolded_size_ = 1;
};

struct CheckFailure {
  std::vector<std::size_t> path;  // child positions from the root
  std::string reason;
};

struct CheckResult {
  std::optional<CheckFailure> failure;

  bool ok() const { return !failure.has_value(); }
  explicit operator bool() const { return ok(); }

  static CheckResult success() { return {}; }
  static CheckResult fail(std::vector<std::size_t> path, std::string reason) {
    return {CheckFailure{std::move(path), std::move(reason)}};
  }
};

/// Validates p as a derivation of a covered-by-u over the axiom set.
/// Invalid proofs yield a failure with the path to the first bad node.
CheckResult check_proof(const SingletonAxiomSet& s, const Subset& u,
                        const Element& a, const ProofPtr& p);
CheckResult check_proof(const IndexedAxiomSet& s, const Subset& u,
                        const Element& a, const ProofPtr& p);

/// The axiom condition: a is covered by its own axiom subset,
/// inf(a, i, [refl(y) for y in children(a, i)]).
ProofPtr axiom_condition(const SingletonAxiomSet& s, const Element& a);
ProofPtr axiom_condition(const IndexedAxiomSet& s, const Element& a,
                         std::size_t index);

/// Transitivity as leaf grafting: every refl(u) leaf of p (a proof of
/// a covered-by-u) is replaced by leaf_proofs.at(u), a proof of u
/// covered-by-v; inf nodes are kept. Validates p and every used leaf
/// proof first. Throws MissingLeafProof / InvalidInput.
ProofPtr transitivity(const SingletonAxiomSet& s, const Subset& u,
                      const Subset& v, const ProofPtr& p,
                      const std::map<Element, ProofPtr>& leaf_proofs);
ProofPtr transitivity(const IndexedAxiomSet& s, const Subset& u,
                      const Subset& v, const ProofPtr& p,
                      const std::map<Element, ProofPtr>& leaf_proofs);

/// Destructor of a proof of a covered-by-empty: returns the subproof
/// for the child y. A refl root is impossible there and signals a
/// corrupt certificate (ImpossibleRefl); y outside children(a) is
/// NotAChild.
ProofPtr pi(const SingletonAxiomSet& s, const Element& a, const ProofPtr& p,
            const Element& y);

/// The finite subset of elements at refl leaves. If p proves
/// a covered-by-u, then p also proves a covered-by-bar_leaves(p), and
/// the leaves are contained in u.
Subset bar_leaves(const ProofPtr& p);

/// True iff a is not among its own children. Guaranteed whenever a is
/// covered by the empty set.
bool no_self_membership(const SingletonAxiomSet& s, const Element& a);

}  // namespace topo

#endif
