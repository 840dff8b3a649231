#include "topocover/positivity.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "topocover/error.hpp"

namespace topo {

namespace {

struct NodeData {
  std::vector<std::size_t> indexes;
  std::vector<std::vector<Element>> children;  // aligned with indexes
};

// Enumerates the f-restricted closure from a (elements outside f can
// never join the witness set, so they are not expanded). Returns
// nullopt when the closure exceeds the budget.
template <typename Expand>
std::optional<std::unordered_map<Element, NodeData>> enumerate_within_f(
    const Subset& f, const Element& a, std::uint64_t budget,
    const Expand& expand) {
  std::unordered_map<Element, NodeData> nodes;
  if (!f.member(a)) return nodes;  // empty closure; a itself not in f
  std::vector<Element> frontier{a};
  while (!frontier.empty()) {
    Element e = std::move(frontier.back());
    frontier.pop_back();
    if (nodes.count(e)) continue;
    if (nodes.size() == budget) return std::nullopt;
    NodeData node = expand(e);
    for (const auto& child_list : node.children) {
      for (const Element& y : child_list) {
        if (f.member(y) && !nodes.count(y)) frontier.push_back(y);
      }
    }
    nodes.emplace(std::move(e), std::move(node));
  }
  return nodes;
}

// Greatest fixed point by iterated elimination: drop any element that
// has an index with no surviving child, repeat until stable.
std::unordered_set<Element> greatest_closed_subset(
    const std::unordered_map<Element, NodeData>& nodes, const Subset& f) {
  std::unordered_set<Element> alive;
  for (const auto& [e, node] : nodes) {
    if (f.member(e)) alive.insert(e);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Element> doomed;
    for (const Element& e : alive) {
      const NodeData& node = nodes.at(e);
      for (std::size_t pos = 0; pos < node.indexes.size(); ++pos) {
        bool has_alive_child = false;
        for (const Element& y : node.children[pos]) {
          if (alive.count(y)) {
            has_alive_child = true;
            break;
          }
        }
        if (!has_alive_child) {
          doomed.push_back(e);
          break;
        }
      }
    }
    for (const Element& e : doomed) {
      alive.erase(e);
      changed = true;
    }
  }
  return alive;
}

CoinductionWitness witness_from(const std::unordered_set<Element>& alive) {
  CoinductionWitness w;
  w.set.assign(alive.begin(), alive.end());
  std::sort(w.set.begin(), w.set.end());
  return w;
}

// Walks inside the surviving set following the first surviving child
// until an element repeats, then splits stem and cycle.
LassoWitness extract_lasso(const SingletonAxiomSet& s,
                           const std::unordered_set<Element>& alive,
                           const Element& a) {
  std::vector<Element> path;
  std::unordered_map<Element, std::size_t> position;
  Element current = a;
  while (true) {
    auto seen = position.find(current);
    if (seen != position.end()) {
      LassoWitness w;
      w.stem.assign(path.begin(), path.begin() + seen->second);
      w.cycle.assign(path.begin() + seen->second, path.end());
      return w;
    }
    position.emplace(current, path.size());
    path.push_back(current);
    std::optional<Element> next;
    for (const Element& y : s.children(current)) {
      if (alive.count(y)) {
        next = y;
        break;
      }
    }
    // Every surviving element has a surviving child; absence here would
    // mean the elimination loop is broken.
    if (!next) {
      throw Error(Errc::InvalidInput,
                  "positivity: witness set not closed at " + current.encode());
    }
    current = std::move(*next);
  }
}

void require_budget(std::uint64_t budget) {
  if (budget < 1) {
    throw Error(Errc::InvalidInput, "positivity: budget must be at least 1");
  }
}

}  // namespace

PositivityResult positivity(const SingletonAxiomSet& s, const Subset& f,
                            const Element& a, std::uint64_t budget) {
  require_budget(budget);
  auto nodes = enumerate_within_f(f, a, budget, [&s](const Element& e) {
    NodeData node;
    node.indexes = {0};
    node.children = {s.children(e)};
    return node;
  });
  if (!nodes) return PositivityResult::unknown(budget, budget);
  auto alive = greatest_closed_subset(*nodes, f);
  if (!alive.count(a)) return PositivityResult::not_positive();
  return PositivityResult::positive(witness_from(alive),
                                    extract_lasso(s, alive, a));
}

PositivityResult positivity(const IndexedAxiomSet& s, const Subset& f,
                            const Element& a, std::uint64_t budget) {
  require_budget(budget);
  auto nodes = enumerate_within_f(f, a, budget, [&s](const Element& e) {
    NodeData node;
    node.indexes = s.indexes(e);
    for (std::size_t i : node.indexes) node.children.push_back(s.children(e, i));
    return node;
  });
  if (!nodes) return PositivityResult::unknown(budget, budget);
  auto alive = greatest_closed_subset(*nodes, f);
  if (!alive.count(a)) return PositivityResult::not_positive();
  return PositivityResult::positive(witness_from(alive), std::nullopt);
}

namespace {

template <typename AxiomSet>
bool check_coinduction_impl(const AxiomSet& s, const Subset& f,
                            const CoinductionWitness& p, const Element& a) {
  std::unordered_set<Element> members(p.set.begin(), p.set.end());
  if (!members.count(a)) return false;
  for (const Element& b : p.set) {
    if (!f.member(b)) return false;
    if constexpr (std::is_same_v<AxiomSet, SingletonAxiomSet>) {
      bool inside = false;
      for (const Element& y : s.children(b)) {
        if (members.count(y)) {
          inside = true;
          break;
        }
      }
      if (!inside) return false;
    } else {
      for (std::size_t i : s.indexes(b)) {
        bool inside = false;
        for (const Element& y : s.children(b, i)) {
          if (members.count(y)) {
            inside = true;
            break;
          }
        }
        if (!inside) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool check_coinduction(const SingletonAxiomSet& s, const Subset& f,
                       const CoinductionWitness& p, const Element& a) {
  return check_coinduction_impl(s, f, p, a);
}

bool check_coinduction(const IndexedAxiomSet& s, const Subset& f,
                       const CoinductionWitness& p, const Element& a) {
  return check_coinduction_impl(s, f, p, a);
}

std::optional<LassoWitness> infinite_chain(const SingletonAxiomSet& s,
                                           const Element& a,
                                           std::uint64_t budget) {
  PositivityResult r = positivity(s, Subset::universal(), a, budget);
  if (r.is_unknown()) {
    throw Error(Errc::BudgetExhausted,
                "infinite_chain: reachable set from " + a.encode() +
                    " exceeds budget " + std::to_string(budget));
  }
  if (r.is_not_positive()) return std::nullopt;
  return r.lasso();
}

bool lasso_witnesses_positivity(const SingletonAxiomSet& s, const Subset& f,
                                const Element& root, const LassoWitness& w) {
  if (!lasso_path_valid(s, root, w)) return false;
  for (const Element& e : w.stem) {
    if (!f.member(e)) return false;
  }
  for (const Element& e : w.cycle) {
    if (!f.member(e)) return false;
  }
  return true;
}

}  // namespace topo
