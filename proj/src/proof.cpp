#include "topocover/proof.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "topocover/error.hpp"

namespace topo {

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return r;
}

// Children of a at index i, or nullopt when i is not a valid index.
// Adapts the two axiom-set flavours to one checker.
using ChildrenLookup = std::function<std::optional<std::vector<Element>>(
    const Element&, std::size_t)>;

ChildrenLookup lookup_for(const SingletonAxiomSet& s) {
  return [&s](const Element& a,
              std::size_t i) -> std::optional<std::vector<Element>> {
    if (i != 0) return std::nullopt;
    return s.children(a);
  };
}

ChildrenLookup lookup_for(const IndexedAxiomSet& s) {
  return [&s](const Element& a,
              std::size_t i) -> std::optional<std::vector<Element>> {
    auto idx = s.indexes(a);
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) {
      return std::nullopt;
    }
    return s.children(a, i);
  };
}

struct CheckFrame {
  const CoverProof* node;
  std::size_t parent;          // frame index; npos for the root
  std::size_t position;        // child position within the parent
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

std::vector<std::size_t> path_to(const std::vector<CheckFrame>& frames,
                                 std::size_t frame) {
  std::vector<std::size_t> path;
  for (std::size_t f = frame; frames[f].parent != CheckFrame::npos;
       f = frames[f].parent) {
    path.push_back(frames[f].position);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

CheckResult check_impl(const ChildrenLookup& children_at, const Subset& u,
                       const Element& a, const ProofPtr& p) {
  if (!p) return CheckResult::fail({}, "null proof");
  std::vector<CheckFrame> frames;
  frames.push_back({p.get(), CheckFrame::npos, 0});
  // Explicit work list; certificates can be deep and recursion here
  // would bound the checkable height by the machine stack.
  std::vector<std::size_t> work{0};
  // Shared subproofs only need checking once per (node, already-seen)
  // occurrence; the subset and axiom set are fixed for the whole run.
  std::unordered_set<const CoverProof*> verified;

  while (!work.empty()) {
    std::size_t fi = work.back();
    work.pop_back();
    const CoverProof* node = frames[fi].node;
    if (verified.count(node)) continue;

    if (node->rule() == CoverProof::Rule::Refl) {
      if (!u.member(node->element())) {
        return CheckResult::fail(
            path_to(frames, fi),
            "refl(" + node->element().encode() + "): element is not in U");
      }
      verified.insert(node);
      continue;
    }

    auto expected = children_at(node->element(), node->index());
    if (!expected) {
      return CheckResult::fail(
          path_to(frames, fi),
          "inf(" + node->element().encode() + "): index " +
              std::to_string(node->index()) + " is not a valid axiom index");
    }
    const auto& ks = node->children();
    if (ks.size() != expected->size()) {
      return CheckResult::fail(
          path_to(frames, fi),
          "inf(" + node->element().encode() + "): expected " +
              std::to_string(expected->size()) + " subproofs, found " +
              std::to_string(ks.size()));
    }
    for (std::size_t j = 0; j < ks.size(); ++j) {
      if (!ks[j]) {
        return CheckResult::fail(path_to(frames, fi),
                                 "inf(" + node->element().encode() +
                                     "): missing subproof at position " +
                                     std::to_string(j));
      }
      if (ks[j]->element() != (*expected)[j]) {
        std::vector<std::size_t> path = path_to(frames, fi);
        path.push_back(j);
        return CheckResult::fail(
            std::move(path),
            "subproof root " + ks[j]->element().encode() +
                " misaligned with child " + (*expected)[j].encode());
      }
      frames.push_back({ks[j].get(), fi, j});
      work.push_back(frames.size() - 1);
    }
    verified.insert(node);
  }

  if (p->element() != a) {
    return CheckResult::fail({}, "proof is for " + p->element().encode() +
                                     ", not for " + a.encode());
  }
  return CheckResult::success();
}

}  // namespace

ProofPtr CoverProof::refl(Element a) {
  auto node = std::shared_ptr<CoverProof>(new CoverProof());
  node->rule_ = Rule::Refl;
  node->element_ = std::move(a);
  return node;
}

ProofPtr CoverProof::inf(Element a, std::size_t index,
                         std::vector<ProofPtr> children) {
  for (const ProofPtr& k : children) {
    if (!k) throw Error(Errc::InvalidInput, "inf: null subproof");
  }
  auto node = std::shared_ptr<CoverProof>(new CoverProof());
  node->rule_ = Rule::Inf;
  node->element_ = std::move(a);
  node->index_ = index;
  node->children_ = std::move(children);
  std::size_t height = 0;
  std::uint64_t size = 1;
  for (const ProofPtr& k : node->children_) {
    height = std::max(height, k->height());
    size = saturating_add(size, k->unfolded_size());
  }
  node->height_ = height + 1;
  node->unfolded_size_ = size;
  return node;
}

CheckResult check_proof(const SingletonAxiomSet& s, const Subset& u,
                        const Element& a, const ProofPtr& p) {
  return check_impl(lookup_for(s), u, a, p);
}

CheckResult check_proof(const IndexedAxiomSet& s, const Subset& u,
                        const Element& a, const ProofPtr& p) {
  return check_impl(lookup_for(s), u, a, p);
}

ProofPtr axiom_condition(const SingletonAxiomSet& s, const Element& a) {
  std::vector<ProofPtr> leaves;
  for (Element& y : s.children(a)) leaves.push_back(CoverProof::refl(y));
  return CoverProof::inf(a, 0, std::move(leaves));
}

ProofPtr axiom_condition(const IndexedAxiomSet& s, const Element& a,
                         std::size_t index) {
  auto idx = s.indexes(a);
  if (std::find(idx.begin(), idx.end(), index) == idx.end()) {
    throw Error(Errc::IndexOutOfRange,
                "axiom_condition: " + std::to_string(index) +
                    " is not an index of " + a.encode());
  }
  std::vector<ProofPtr> leaves;
  for (Element& y : s.children(a, index)) {
    leaves.push_back(CoverProof::refl(y));
  }
  return CoverProof::inf(a, index, std::move(leaves));
}

namespace {

template <typename AxiomSet>
ProofPtr transitivity_impl(const AxiomSet& s, const Subset& u, const Subset& v,
                           const ProofPtr& p,
                           const std::map<Element, ProofPtr>& leaf_proofs) {
  if (!p) throw Error(Errc::InvalidInput, "transitivity: null proof");
  if (auto check = check_proof(s, u, p->element(), p); !check) {
    throw Error(Errc::InvalidInput,
                "transitivity: input proof does not check: " +
                    check.failure->reason);
  }

  // Post-order graft over the proof DAG; shared subproofs are grafted
  // once. Leaf replacements are validated against V on first use.
  std::unordered_map<const CoverProof*, ProofPtr> grafted;
  std::unordered_set<const CoverProof*> checked_leaf_proofs;
  std::vector<std::pair<const CoverProof*, bool>> work{{p.get(), false}};
  while (!work.empty()) {
    auto [node, expanded] = work.back();
    work.pop_back();
    if (grafted.count(node)) continue;

    if (node->rule() == CoverProof::Rule::Refl) {
      const Element& leaf = node->element();
      auto it = leaf_proofs.find(leaf);
      if (it == leaf_proofs.end() || !it->second) {
        throw Error(Errc::MissingLeafProof,
                    "transitivity: no proof supplied for leaf " +
                        leaf.encode());
      }
      if (!checked_leaf_proofs.count(it->second.get())) {
        if (auto check = check_proof(s, v, leaf, it->second); !check) {
          throw Error(Errc::InvalidInput,
                      "transitivity: supplied proof for leaf " +
                          leaf.encode() +
                          " does not check: " + check.failure->reason);
        }
        checked_leaf_proofs.insert(it->second.get());
      }
      grafted.emplace(node, it->second);
      continue;
    }

    if (!expanded) {
      work.push_back({node, true});
      for (const ProofPtr& k : node->children()) {
        work.push_back({k.get(), false});
      }
      continue;
    }
    std::vector<ProofPtr> children;
    children.reserve(node->children().size());
    for (const ProofPtr& k : node->children()) {
      children.push_back(grafted.at(k.get()));
    }
    grafted.emplace(node, CoverProof::inf(node->element(), node->index(),
                                          std::move(children)));
  }
  return grafted.at(p.get());
}

}  // namespace

ProofPtr transitivity(const SingletonAxiomSet& s, const Subset& u,
                      const Subset& v, const ProofPtr& p,
                      const std::map<Element, ProofPtr>& leaf_proofs) {
  return transitivity_impl(s, u, v, p, leaf_proofs);
}

ProofPtr transitivity(const IndexedAxiomSet& s, const Subset& u,
                      const Subset& v, const ProofPtr& p,
                      const std::map<Element, ProofPtr>& leaf_proofs) {
  return transitivity_impl(s, u, v, p, leaf_proofs);
}

ProofPtr pi(const SingletonAxiomSet& s, const Element& a, const ProofPtr& p,
            const Element& y) {
  if (!p) throw Error(Errc::InvalidInput, "pi: null proof");
  if (p->rule() == CoverProof::Rule::Refl) {
    throw Error(Errc::ImpossibleRefl,
                "pi: refl(" + p->element().encode() +
                    ") in a proof of covering by the empty set");
  }
  if (p->element() != a) {
    throw Error(Errc::InvalidInput, "pi: proof is for " +
                                        p->element().encode() + ", not " +
                                        a.encode());
  }
  auto children = s.children(a);
  auto it = std::lower_bound(children.begin(), children.end(), y);
  if (it == children.end() || *it != y) {
    throw Error(Errc::NotAChild,
                "pi: " + y.encode() + " is not a child of " + a.encode());
  }
  auto position = static_cast<std::size_t>(it - children.begin());
  if (position >= p->children().size()) {
    throw Error(Errc::InvalidCertificate,
                "pi: certificate misaligned with children of " + a.encode());
  }
  return p->children()[position];
}

Subset bar_leaves(const ProofPtr& p) {
  if (!p) throw Error(Errc::InvalidInput, "bar_leaves: null proof");
  std::vector<Element> leaves;
  std::unordered_set<const CoverProof*> seen;
  std::vector<const CoverProof*> work{p.get()};
  while (!work.empty()) {
    const CoverProof* node = work.back();
    work.pop_back();
    if (!seen.insert(node).second) continue;
    if (node->rule() == CoverProof::Rule::Refl) {
      leaves.push_back(node->element());
    } else {
      for (const ProofPtr& k : node->children()) work.push_back(k.get());
    }
  }
  return Subset::finite(std::move(leaves));
}

bool no_self_membership(const SingletonAxiomSet& s, const Element& a) {
  auto children = s.children(a);
  return !std::binary_search(children.begin(), children.end(), a);
}

}  // namespace topo
