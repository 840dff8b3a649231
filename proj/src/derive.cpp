#include "topocover/derive.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "topocover/error.hpp"

namespace topo {

namespace {

void require_budget(std::uint64_t budget) {
  if (budget < 1) {
    throw Error(Errc::InvalidInput, "derive: budget must be at least 1");
  }
}

struct Frame {
  Element element;
  std::vector<Element> children;
  std::size_t next_child = 0;
  std::vector<ProofPtr> child_proofs;
};

}  // namespace

CoverResult derive(const SingletonAxiomSet& s, const Subset& u,
                   const Element& a, std::uint64_t budget) {
  require_budget(budget);

  enum class Mark { OnPath, Covered };
  std::unordered_map<Element, Mark> mark;
  std::unordered_map<Element, ProofPtr> proofs;
  std::vector<Frame> stack;
  std::uint64_t explored = 0;

  // Returns the proof when e is immediately resolvable, pushes a frame
  // otherwise. nullopt + empty push signal "descend".
  auto lasso_from_stack = [&stack](const Element& hit) {
    std::size_t start = 0;
    while (stack[start].element != hit) ++start;
    LassoWitness w;
    for (std::size_t i = 0; i < start; ++i) {
      w.stem.push_back(stack[i].element);
    }
    for (std::size_t i = start; i < stack.size(); ++i) {
      w.cycle.push_back(stack[i].element);
    }
    return w;
  };

  auto enter = [&](const Element& e) -> std::optional<CoverResult> {
    auto it = mark.find(e);
    if (it != mark.end()) {
      if (it->second == Mark::OnPath) {
        return CoverResult::uncovered(lasso_from_stack(e));
      }
      return std::nullopt;  // covered, proof available
    }
    if (explored == budget) {
      return CoverResult::unknown(explored, budget);
    }
    ++explored;
    if (u.member(e)) {
      mark[e] = Mark::Covered;
      proofs[e] = CoverProof::refl(e);
      return std::nullopt;
    }
    mark[e] = Mark::OnPath;
    stack.push_back(Frame{e, s.children(e)});
    return std::nullopt;
  };

  if (auto early = enter(a)) return *early;
  if (stack.empty()) return CoverResult::covered(proofs.at(a));

  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next_child < top.children.size()) {
      // Copy: enter() may grow the stack and invalidate the frame.
      Element child = top.children[top.next_child];
      auto found = proofs.find(child);
      if (found != proofs.end()) {
        top.child_proofs.push_back(found->second);
        ++top.next_child;
        continue;
      }
      if (auto stop = enter(child)) return *stop;
      // Either a frame was pushed (descend) or the child resolved to a
      // refl proof; re-examine the top of the stack.
      continue;
    }
    ProofPtr proof = CoverProof::inf(top.element, 0,
                                     std::move(top.child_proofs));
    mark[top.element] = Mark::Covered;
    proofs[top.element] = proof;
    stack.pop_back();
  }
  return CoverResult::covered(proofs.at(a));
}

namespace {

struct IndexedNode {
  std::vector<std::size_t> indexes;
  std::vector<std::vector<Element>> children;  // aligned with indexes
};

}  // namespace

CoverResult derive(const IndexedAxiomSet& s, const Subset& u, const Element& a,
                   std::uint64_t budget) {
  require_budget(budget);

  // Phase 1: enumerate everything reachable from a, materializing the
  // axiom data once per element.
  std::unordered_map<Element, IndexedNode> nodes;
  std::vector<Element> order;
  std::vector<Element> frontier{a};
  while (!frontier.empty()) {
    Element e = std::move(frontier.back());
    frontier.pop_back();
    if (nodes.count(e)) continue;
    if (nodes.size() == budget) {
      return CoverResult::unknown(budget, budget);
    }
    IndexedNode node;
    node.indexes = s.indexes(e);
    for (std::size_t i : node.indexes) {
      node.children.push_back(s.children(e, i));
      for (const Element& y : node.children.back()) frontier.push_back(y);
    }
    order.push_back(e);
    nodes.emplace(std::move(e), std::move(node));
  }

  // Phase 2: round-based least-fixed-point saturation. Rounds witness
  // against the previous round's covered set only, so the recorded
  // (round, index) stamps give strictly decreasing ranks and the
  // reconstructed proof is a finite tree.
  struct Stamp {
    std::uint64_t round;
    std::size_t index;  // meaningless at round 0 (refl)
  };
  std::unordered_map<Element, Stamp> covered;
  for (const Element& e : order) {
    if (u.member(e)) covered.emplace(e, Stamp{0, 0});
  }
  std::uint64_t round = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    ++round;
    std::vector<std::pair<Element, Stamp>> found;
    for (const Element& e : order) {
      if (covered.count(e)) continue;
      const IndexedNode& node = nodes.at(e);
      for (std::size_t pos = 0; pos < node.indexes.size(); ++pos) {
        bool all = true;
        for (const Element& y : node.children[pos]) {
          auto it = covered.find(y);
          if (it == covered.end() || it->second.round >= round) {
            all = false;
            break;
          }
        }
        if (all) {
          found.emplace_back(e, Stamp{round, node.indexes[pos]});
          break;
        }
      }
    }
    for (auto& [e, stamp] : found) {
      covered.emplace(std::move(e), stamp);
      changed = true;
    }
  }

  if (!covered.count(a)) {
    UncoveredSetWitness w;
    for (const Element& e : order) {
      if (!covered.count(e)) w.set.push_back(e);
    }
    std::sort(w.set.begin(), w.set.end());
    return CoverResult::uncovered(std::move(w));
  }

  // Phase 3: reconstruct the proof along the recorded stamps.
  std::unordered_map<Element, ProofPtr> proofs;
  std::vector<std::pair<Element, bool>> work{{a, false}};
  while (!work.empty()) {
    auto [e, expanded] = work.back();
    work.pop_back();
    if (proofs.count(e)) continue;
    const Stamp& stamp = covered.at(e);
    if (stamp.round == 0) {
      proofs.emplace(e, CoverProof::refl(e));
      continue;
    }
    const IndexedNode& node = nodes.at(e);
    std::size_t pos = static_cast<std::size_t>(
        std::find(node.indexes.begin(), node.indexes.end(), stamp.index) -
        node.indexes.begin());
    if (!expanded) {
      work.push_back({e, true});
      for (const Element& y : node.children[pos]) work.push_back({y, false});
      continue;
    }
    std::vector<ProofPtr> ks;
    ks.reserve(node.children[pos].size());
    for (const Element& y : node.children[pos]) ks.push_back(proofs.at(y));
    proofs.emplace(e, CoverProof::inf(e, stamp.index, std::move(ks)));
  }
  return CoverResult::covered(proofs.at(a));
}

namespace {

bool is_child_of(const SingletonAxiomSet& s, const Element& parent,
                 const Element& next) {
  auto children = s.children(parent);
  return std::binary_search(children.begin(), children.end(), next);
}

}  // namespace

bool lasso_path_valid(const SingletonAxiomSet& s, const Element& root,
                      const LassoWitness& w) {
  if (w.cycle.empty()) return false;
  const Element& start = w.stem.empty() ? w.cycle.front() : w.stem.front();
  if (start != root) return false;
  for (std::size_t i = 0; i + 1 < w.stem.size(); ++i) {
    if (!is_child_of(s, w.stem[i], w.stem[i + 1])) return false;
  }
  if (!w.stem.empty() && !is_child_of(s, w.stem.back(), w.cycle.front())) {
    return false;
  }
  // Pump the cycle twice; a once-around check would accept a cycle
  // whose wrap edge only exists on the first pass of a stateful
  // provider, and providers are cheap to re-query anyway.
  std::size_t n = w.cycle.size();
  for (std::size_t lap = 0; lap < 2; ++lap) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_child_of(s, w.cycle[i], w.cycle[(i + 1) % n])) return false;
    }
  }
  return true;
}

bool lasso_refutes_cover(const SingletonAxiomSet& s, const Subset& u,
                         const Element& root, const LassoWitness& w) {
  if (!lasso_path_valid(s, root, w)) return false;
  for (const Element& e : w.stem) {
    if (u.member(e)) return false;
  }
  for (const Element& e : w.cycle) {
    if (u.member(e)) return false;
  }
  return true;
}

bool set_refutes_cover(const IndexedAxiomSet& s, const Subset& u,
                       const Element& root, const UncoveredSetWitness& w) {
  std::unordered_set<Element> members(w.set.begin(), w.set.end());
  if (!members.count(root)) return false;
  for (const Element& b : w.set) {
    if (u.member(b)) return false;
    for (std::size_t i : s.indexes(b)) {
      bool has_inside = false;
      for (const Element& y : s.children(b, i)) {
        if (members.count(y)) {
          has_inside = true;
          break;
        }
      }
      if (!has_inside) return false;
    }
  }
  return true;
}

}  // namespace topo
