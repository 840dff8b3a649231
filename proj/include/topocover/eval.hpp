#ifndef TOPOCOVER_EVAL_HPP
#define TOPOCOVER_EVAL_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "topocover/axioms.hpp"
#include "topocover/element.hpp"
#include "topocover/proof.hpp"

namespace topo {

/// Results are elements (typically Nat); keeping one universe lets
/// programs return tuples without an API break.
using Value = Element;

struct Divergence {
  enum class Reason { FuelExhausted, CyclicCall };
  Reason reason = Reason::FuelExhausted;
};

class EvalResult {
 public:
  static EvalResult value(Value v) {
    EvalResult r;
    r.value_ = std::move(v);
    r.diverged_ = false;
    return r;
  }
  static EvalResult divergence(Divergence d) {
    EvalResult r;
    r.divergence_ = d;
    r.diverged_ = true;
    return r;
  }

  bool diverged() const { return diverged_; }
  const Value& value() const;
  Divergence divergence() const;

 private:
  bool diverged_ = true;
  Value value_;
  Divergence divergence_;
};

/// The one-step body of a recursive definition: step(a, recurse)
/// computes the result at a given the results of the recursive calls.
/// The recurse callback is guarded and accepts exactly the elements of
/// children(a); anything else raises Error(GuardViolation).
struct Functional {
  using Recurse = std::function<Value(const Element&)>;
  using StepFn = std::function<Value(const Element&, const Recurse&)>;

  Functional() = default;
  explicit Functional(StepFn fn) : step(std::move(fn)) {}

  StepFn step;
};

/// Per-index step bodies aligned with an indexed axiom set; the recurse
/// callback of step(a, i, recurse) accepts exactly children(a, i).
struct NondetFunctional {
  using Recurse = std::function<Value(const Element&)>;
  using StepFn =
      std::function<Value(const Element&, std::size_t, const Recurse&)>;

  NondetFunctional() = default;
  explicit NondetFunctional(StepFn fn) : step(std::move(fn)) {}

  StepFn step;
};

/// Known values of the function on a finite decidable subset.
class OracleTable {
 public:
  OracleTable() = default;
  explicit OracleTable(std::map<Element, Value> entries)
      : entries_(std::move(entries)) {}

  bool contains(const Element& key) const { return entries_.count(key) > 0; }
  const Value& at(const Element& key) const { return entries_.at(key); }
  const std::map<Element, Value>& entries() const { return entries_; }

  /// The finite subset of keys (the U the table computes relative to).
  Subset keys() const;

 private:
  std::map<Element, Value> entries_;
};

/// Recursion over a certificate of a covered-by-empty: total, no fuel.
/// The certificate is checked up front (Error(InvalidCertificate) on
/// failure) and recursion is structured by pi, with a defensive depth
/// cap equal to the certificate height so corruption surfaces as a
/// clean error rather than a runaway.
Value eval_certified(const Functional& h, const SingletonAxiomSet& s,
                     const Element& a, const ProofPtr& p);

/// The erased evaluator: plain demand-driven recursion with no proof
/// argument. Each actual evaluation of an element consumes one unit of
/// fuel; exhaustion is the Divergence outcome, not an exception. With
/// memoize (the default) each element is evaluated at most once and a
/// self-dependent evaluation is reported as divergence immediately.
EvalResult eval_extracted(const Functional& h, const SingletonAxiomSet& s,
                          const Element& a, std::uint64_t fuel,
                          bool memoize = true);

/// Like eval_extracted, but every evaluation (including the root) first
/// consults the table and returns the stored value without calling the
/// functional. Equivalent to erasing the table keys from the axiom set
/// and lifting the functional accordingly.
EvalResult eval_relative(const Functional& h, const SingletonAxiomSet& s,
                         const Element& a, const OracleTable& table,
                         std::uint64_t fuel, bool memoize = true);

class OutcomeResult {
 public:
  static OutcomeResult outcomes(std::vector<Value> values) {
    OutcomeResult r;
    r.outcomes_ = std::move(values);
    r.diverged_ = false;
    return r;
  }
  static OutcomeResult divergence(Divergence d) {
    OutcomeResult r;
    r.divergence_ = d;
    r.diverged_ = true;
    return r;
  }

  bool diverged() const { return diverged_; }
  /// Sorted, duplicate-free. Empty means no resolution of the choices
  /// terminates (every run diverges).
  const std::vector<Value>& outcomes() const;
  Divergence divergence() const;

 private:
  bool diverged_ = true;
  std::vector<Value> outcomes_;
  Divergence divergence_;
};

/// All values obtainable by resolving every index choice in every
/// order: the least fixed point of set-valued evaluation, saturated
/// round by round with memoized selections. Fuel counts discovered
/// elements plus step applications; exhaustion before saturation is
/// Divergence.
OutcomeResult enumerate_outcomes(const NondetFunctional& n,
                                 const IndexedAxiomSet& s, const Element& a,
                                 std::uint64_t fuel);

}  // namespace topo

#endif
