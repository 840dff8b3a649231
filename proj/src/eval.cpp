#include "topocover/eval.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "topocover/error.hpp"

namespace topo {

namespace {

// Internal signal converted to an EvalResult at the API boundary; it
// has to unwind through user step frames, so it is not an Error.
struct DivergenceSignal {
  Divergence divergence;
};

void require_fuel(std::uint64_t fuel, const char* who) {
  if (fuel < 1) {
    throw Error(Errc::InvalidInput,
                std::string(who) + ": fuel must be at least 1");
  }
}

}  // namespace

const Value& EvalResult::value() const {
  if (diverged_) {
    throw Error(Errc::InvalidInput, "EvalResult: no value, run diverged");
  }
  return value_;
}

Divergence EvalResult::divergence() const {
  if (!diverged_) {
    throw Error(Errc::InvalidInput, "EvalResult: run produced a value");
  }
  return divergence_;
}

const std::vector<Value>& OutcomeResult::outcomes() const {
  if (diverged_) {
    throw Error(Errc::InvalidInput, "OutcomeResult: run diverged");
  }
  return outcomes_;
}

Divergence OutcomeResult::divergence() const {
  if (!diverged_) {
    throw Error(Errc::InvalidInput, "OutcomeResult: run produced outcomes");
  }
  return divergence_;
}

Subset OracleTable::keys() const {
  std::vector<Element> ks;
  ks.reserve(entries_.size());
  for (const auto& [key, value] : entries_) ks.push_back(key);
  return Subset::finite(std::move(ks));
}

namespace {

Value eval_certified_at(const Functional& h, const SingletonAxiomSet& s,
                        const Element& a, const ProofPtr& p,
                        std::size_t depth, std::size_t depth_cap) {
  if (depth > depth_cap) {
    throw Error(Errc::InvalidCertificate,
                "eval_certified: recursion deeper than certificate height");
  }
  Functional::Recurse recurse = [&](const Element& y) -> Value {
    ProofPtr sub = pi(s, a, p, y);
    return eval_certified_at(h, s, y, sub, depth + 1, depth_cap);
  };
  return h.step(a, recurse);
}

}  // namespace

Value eval_certified(const Functional& h, const SingletonAxiomSet& s,
                     const Element& a, const ProofPtr& p) {
  if (!h.step) throw Error(Errc::InvalidInput, "eval_certified: no step");
  if (auto check = check_proof(s, Subset::empty(), a, p); !check) {
    throw Error(Errc::InvalidCertificate,
                "eval_certified: certificate does not check: " +
                    check.failure->reason);
  }
  return eval_certified_at(h, s, a, p, 1, p->height());
}

namespace {

// Demand-driven evaluation shared by the extracted and the relative
// evaluators; the oracle, when present, intercepts every evaluation
// before the functional is consulted.
class ExtractedEngine {
 public:
  ExtractedEngine(const Functional& h, const SingletonAxiomSet& s,
                  const OracleTable* oracle, std::uint64_t fuel, bool memoize)
      : h_(h), s_(s), oracle_(oracle), fuel_(fuel), memoize_(memoize) {}

  Value eval(const Element& a) {
    if (oracle_ && oracle_->contains(a)) return oracle_->at(a);
    if (memoize_) {
      auto hit = memo_.find(a);
      if (hit != memo_.end()) return hit->second;
      if (in_progress_.count(a)) {
        // The plain recursion would re-enter a before finishing it:
        // an infinite loop, reported without burning the whole budget.
        throw DivergenceSignal{{Divergence::Reason::CyclicCall}};
      }
    }
    if (fuel_ == 0) {
      throw DivergenceSignal{{Divergence::Reason::FuelExhausted}};
    }
    --fuel_;
    if (memoize_) in_progress_.insert(a);

    std::vector<Element> children = s_.children(a);
    Functional::Recurse recurse = [&](const Element& y) -> Value {
      if (!std::binary_search(children.begin(), children.end(), y)) {
        throw Error(Errc::GuardViolation,
                    "step queried " + y.encode() +
                        ", which is not a child of " + a.encode());
      }
      return eval(y);
    };
    Value v = h_.step(a, recurse);
    if (memoize_) {
      in_progress_.erase(a);
      memo_.emplace(a, v);
    }
    return v;
  }

 private:
  const Functional& h_;
  const SingletonAxiomSet& s_;
  const OracleTable* oracle_;
  std::uint64_t fuel_;
  bool memoize_;
  std::unordered_map<Element, Value> memo_;
  std::unordered_set<Element> in_progress_;
};

EvalResult run_extracted(const Functional& h, const SingletonAxiomSet& s,
                         const Element& a, const OracleTable* oracle,
                         std::uint64_t fuel, bool memoize) {
  if (!h.step) throw Error(Errc::InvalidInput, "eval: functional has no step");
  require_fuel(fuel, "eval");
  try {
    ExtractedEngine engine(h, s, oracle, fuel, memoize);
    return EvalResult::value(engine.eval(a));
  } catch (const DivergenceSignal& signal) {
    return EvalResult::divergence(signal.divergence);
  }
}

}  // namespace

EvalResult eval_extracted(const Functional& h, const SingletonAxiomSet& s,
                          const Element& a, std::uint64_t fuel, bool memoize) {
  return run_extracted(h, s, a, nullptr, fuel, memoize);
}

EvalResult eval_relative(const Functional& h, const SingletonAxiomSet& s,
                         const Element& a, const OracleTable& table,
                         std::uint64_t fuel, bool memoize) {
  return run_extracted(h, s, a, &table, fuel, memoize);
}

namespace {

struct OutcomeNode {
  std::vector<std::size_t> indexes;
  std::vector<std::vector<Element>> children;    // aligned with indexes
  std::vector<std::set<std::vector<Value>>> applied;  // selections done
  std::set<Value> outcomes;
};

}  // namespace

OutcomeResult enumerate_outcomes(const NondetFunctional& n,
                                 const IndexedAxiomSet& s, const Element& a,
                                 std::uint64_t fuel) {
  if (!n.step) {
    throw Error(Errc::InvalidInput, "enumerate_outcomes: no step");
  }
  require_fuel(fuel, "enumerate_outcomes");

  // Discovery of each element and each step application both draw from
  // the same fuel pool.
  std::unordered_map<Element, OutcomeNode> nodes;
  std::vector<Element> order;
  std::vector<Element> frontier{a};
  while (!frontier.empty()) {
    Element e = std::move(frontier.back());
    frontier.pop_back();
    if (nodes.count(e)) continue;
    if (fuel == 0) {
      return OutcomeResult::divergence({Divergence::Reason::FuelExhausted});
    }
    --fuel;
    OutcomeNode node;
    node.indexes = s.indexes(e);
    for (std::size_t i : node.indexes) {
      node.children.push_back(s.children(e, i));
      for (const Element& y : node.children.back()) frontier.push_back(y);
    }
    node.applied.resize(node.indexes.size());
    order.push_back(e);
    nodes.emplace(std::move(e), std::move(node));
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (const Element& e : order) {
      OutcomeNode& node = nodes.at(e);
      for (std::size_t pos = 0; pos < node.indexes.size(); ++pos) {
        const std::vector<Element>& children = node.children[pos];

        // Snapshot the child outcome sets; the odometer below walks
        // their cartesian product in lexicographic order.
        std::vector<std::vector<Value>> pools;
        pools.reserve(children.size());
        bool empty_pool = false;
        for (const Element& y : children) {
          const auto& outcome_set = nodes.at(y).outcomes;
          if (outcome_set.empty()) {
            empty_pool = true;
            break;
          }
          pools.emplace_back(outcome_set.begin(), outcome_set.end());
        }
        if (empty_pool) continue;

        std::vector<std::size_t> cursor(children.size(), 0);
        while (true) {
          std::vector<Value> selection(children.size());
          for (std::size_t c = 0; c < children.size(); ++c) {
            selection[c] = pools[c][cursor[c]];
          }
          if (node.applied[pos].insert(selection).second) {
            if (fuel == 0) {
              return OutcomeResult::divergence(
                  {Divergence::Reason::FuelExhausted});
            }
            --fuel;
            NondetFunctional::Recurse recurse =
                [&](const Element& y) -> Value {
              auto it = std::lower_bound(children.begin(), children.end(), y);
              if (it == children.end() || *it != y) {
                throw Error(Errc::GuardViolation,
                            "step queried " + y.encode() +
                                ", which is not a child of " + e.encode() +
                                " at index " +
                                std::to_string(node.indexes[pos]));
              }
              return selection[static_cast<std::size_t>(
                  it - children.begin())];
            };
            Value v = n.step(e, node.indexes[pos], recurse);
            if (node.outcomes.insert(std::move(v)).second) changed = true;
          }
          // Advance the odometer.
          std::size_t c = 0;
          for (; c < cursor.size(); ++c) {
            if (++cursor[c] < pools[c].size()) break;
            cursor[c] = 0;
          }
          if (c == cursor.size()) break;
        }
      }
    }
  }

  const auto& result = nodes.at(a).outcomes;
  return OutcomeResult::outcomes(std::vector<Value>(result.begin(),
                                                    result.end()));
}

}  // namespace topo
