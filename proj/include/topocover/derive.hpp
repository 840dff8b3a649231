#ifndef TOPOCOVER_DERIVE_HPP
#define TOPOCOVER_DERIVE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "topocover/axioms.hpp"
#include "topocover/proof.hpp"

namespace topo {

/// Finite presentation of an infinite child-chain: stem, then a cycle
/// repeated forever. Refutes coverage (no branch of the chain ever
/// meets U) and witnesses positivity.
struct LassoWitness {
  std::vector<Element> stem;
  std::vector<Element> cycle;  // non-empty
};

/// A reachable set on which the uncovered conditions hold pointwise:
/// no member is in U, and every member keeps, for each of its axiom
/// indexes, at least one child inside the set.
struct UncoveredSetWitness {
  std::vector<Element> set;  // sorted, duplicate-free, contains the root
};

class CoverResult {
 public:
  enum class Status { Covered, Uncovered, Unknown };

  static CoverResult covered(ProofPtr proof) {
    CoverResult r;
    r.status_ = Status::Covered;
    r.proof_ = std::move(proof);
    return r;
  }
  static CoverResult uncovered(LassoWitness lasso) {
    CoverResult r;
    r.status_ = Status::Uncovered;
    r.lasso_ = std::move(lasso);
    return r;
  }
  static CoverResult uncovered(UncoveredSetWitness set) {
    CoverResult r;
    r.status_ = Status::Uncovered;
    r.uncovered_set_ = std::move(set);
    return r;
  }
  static CoverResult unknown(std::uint64_t explored, std::uint64_t budget) {
    CoverResult r;
    r.status_ = Status::Unknown;
    r.explored_ = explored;
    r.budget_ = budget;
    return r;
  }

  Status status() const { return status_; }
  bool is_covered() const { return status_ == Status::Covered; }
  bool is_uncovered() const { return status_ == Status::Uncovered; }
  bool is_unknown() const { return status_ == Status::Unknown; }

  /// Covered only.
  const ProofPtr& proof() const { return proof_; }
  /// Uncovered: exactly one of these is present (lasso for singleton
  /// searches, set witness for indexed ones).
  const std::optional<LassoWitness>& lasso() const { return lasso_; }
  const std::optional<UncoveredSetWitness>& uncovered_set() const {
    return uncovered_set_;
  }
  /// Unknown only.
  std::uint64_t explored() const { return explored_; }
  std::uint64_t budget() const { return budget_; }

 private:
  Status status_ = Status::Unknown;
  ProofPtr proof_;
  std::optional<LassoWitness> lasso_;
  std::optional<UncoveredSetWitness> uncovered_set_;
  std::uint64_t explored_ = 0;
  std::uint64_t budget_ = 0;
};

/// Searches the least relation closed under reflexivity and infinity.
///
/// Singleton: memoized depth-first search; hitting an in-progress
/// element yields a lasso from the current path (coverage of a node is
/// conjunctive over its children, so a reachable cycle through non-U
/// elements is already a refutation). Budget counts distinct explored
/// elements; exceeding it yields Unknown, never an error. budget >= 1.
CoverResult derive(const SingletonAxiomSet& s, const Subset& u,
                   const Element& a, std::uint64_t budget);

/// Indexed: enumerates the reachable set, then saturates the least
/// fixed point of covered(b) <= member(u,b) or some index with all
/// children covered; uncovered roots get the complement set as the
/// witness. The existential over indexes makes on-the-fly cycle
/// assumptions unsound, hence the full enumeration.
CoverResult derive(const IndexedAxiomSet& s, const Subset& u, const Element& a,
                   std::uint64_t budget);

/// Structural lasso validity: starts at root, consecutive elements are
/// child-related (stem, cycle, wrap-around), and the cycle pumps twice.
bool lasso_path_valid(const SingletonAxiomSet& s, const Element& root,
                      const LassoWitness& w);

/// Full refutation validity for a cover query: structure plus every
/// element failing membership in u.
bool lasso_refutes_cover(const SingletonAxiomSet& s, const Subset& u,
                         const Element& root, const LassoWitness& w);

/// Pointwise check of the uncovered-set conditions.
bool set_refutes_cover(const IndexedAxiomSet& s, const Subset& u,
                       const Element& root, const UncoveredSetWitness& w);

}  // namespace topo

#endif
