#ifndef TOPOCOVER_POSITIVITY_HPP
#define TOPOCOVER_POSITIVITY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "topocover/axioms.hpp"
#include "topocover/derive.hpp"
#include "topocover/element.hpp"
#include "topocover/subset.hpp"

namespace topo {

/// A set P closed under the positivity destructors: P is inside F and
/// every member keeps, for each axiom index, some child inside P.
/// Exhibiting such a P containing a certifies that a is positive with F.
struct CoinductionWitness {
  std::vector<Element> set;  // sorted, duplicate-free
};

class PositivityResult {
 public:
  enum class Status { Positive, NotPositive, Unknown };

  static PositivityResult positive(CoinductionWitness witness,
                                   std::optional<LassoWitness> lasso) {
    PositivityResult r;
    r.status_ = Status::Positive;
    r.witness_ = std::move(witness);
    r.lasso_ = std::move(lasso);
    return r;
  }
  static PositivityResult not_positive() {
    PositivityResult r;
    r.status_ = Status::NotPositive;
    return r;
  }
  static PositivityResult unknown(std::uint64_t explored,
                                  std::uint64_t budget) {
    PositivityResult r;
    r.status_ = Status::Unknown;
    r.explored_ = explored;
    r.budget_ = budget;
    return r;
  }

  Status status() const { return status_; }
  bool is_positive() const { return status_ == Status::Positive; }
  bool is_not_positive() const { return status_ == Status::NotPositive; }
  bool is_unknown() const { return status_ == Status::Unknown; }

  /// Positive only: the maximal closed set found.
  const CoinductionWitness& witness() const { return witness_; }
  /// Positive over singleton axiom sets only; indexed positive results
  /// carry the set alone (an infinite run under indexed axioms is a
  /// strategy, not a path).
  const std::optional<LassoWitness>& lasso() const { return lasso_; }
  std::uint64_t explored() const { return explored_; }
  std::uint64_t budget() const { return budget_; }

 private:
  Status status_ = Status::Unknown;
  CoinductionWitness witness_;
  std::optional<LassoWitness> lasso_;
  std::uint64_t explored_ = 0;
  std::uint64_t budget_ = 0;
};

/// Decides positivity of a with f by computing the greatest subset of
/// the f-restricted reachable set closed under the destructors
/// (iterated elimination of violating elements). budget >= 1 bounds the
/// number of distinct elements enumerated; exceeding it yields Unknown.
PositivityResult positivity(const SingletonAxiomSet& s, const Subset& f,
                            const Element& a, std::uint64_t budget);
PositivityResult positivity(const IndexedAxiomSet& s, const Subset& f,
                            const Element& a, std::uint64_t budget);

/// The coinduction principle as a checker: true iff a is in the set,
/// the set is inside f, and every member has, for each of its axiom
/// indexes, some child inside the set. True certifies positivity.
bool check_coinduction(const SingletonAxiomSet& s, const Subset& f,
                       const CoinductionWitness& p, const Element& a);
bool check_coinduction(const IndexedAxiomSet& s, const Subset& f,
                       const CoinductionWitness& p, const Element& a);

/// Positivity with the universal subset: a lasso presenting an infinite
/// child-chain from a, or nothing when every chain from a is finite.
/// Throws Error(BudgetExhausted) when the reachable set outgrows the
/// budget, which is distinct from a definite absence.
std::optional<LassoWitness> infinite_chain(const SingletonAxiomSet& s,
                                           const Element& a,
                                           std::uint64_t budget);

/// Structure plus every lasso element being a member of f.
bool lasso_witnesses_positivity(const SingletonAxiomSet& s, const Subset& f,
                                const Element& root, const LassoWitness& w);

}  // namespace topo

#endif
