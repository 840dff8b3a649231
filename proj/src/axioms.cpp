#include "topocover/axioms.hpp"

#include <algorithm>
#include <memory>

namespace topo {

namespace {

void canonicalize(std::vector<Element>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

}  // namespace

IndexedAxiomSet IndexedAxiomSet::from_singleton(SingletonAxiomSet s) {
  auto shared = std::make_shared<SingletonAxiomSet>(std::move(s));
  Provenance origin = shared->origin();
  return IndexedAxiomSet(
      [](const Element&) { return std::vector<std::size_t>{0}; },
      [shared](const Element& a, std::size_t) { return shared->children(a); },
      origin);
}

SingletonAxiomSet from_relation(
    const std::vector<std::pair<Element, Element>>& pairs) {
  auto adjacency = std::make_shared<std::map<Element, std::vector<Element>>>();
  for (const auto& [from, to] : pairs) (*adjacency)[from].push_back(to);
  for (auto& [from, children] : *adjacency) canonicalize(children);
  return SingletonAxiomSet(
      [adjacency](const Element& a) -> std::vector<Element> {
        auto it = adjacency->find(a);
        return it == adjacency->end() ? std::vector<Element>{} : it->second;
      },
      Provenance::FromRelation);
}

SingletonAxiomSet from_explicit_graph(
    std::map<Element, std::vector<Element>> adjacency) {
  for (auto& [node, children] : adjacency) canonicalize(children);
  auto shared = std::make_shared<std::map<Element, std::vector<Element>>>(
      std::move(adjacency));
  return SingletonAxiomSet(
      [shared](const Element& a) -> std::vector<Element> {
        auto it = shared->find(a);
        return it == shared->end() ? std::vector<Element>{} : it->second;
      },
      Provenance::ExplicitGraph);
}

IndexedAxiomSet from_explicit_indexed_graph(
    std::map<Element, std::vector<std::vector<Element>>> adjacency) {
  for (auto& [node, lists] : adjacency) {
    for (auto& children : lists) canonicalize(children);
  }
  auto shared =
      std::make_shared<std::map<Element, std::vector<std::vector<Element>>>>(
          std::move(adjacency));
  return IndexedAxiomSet(
      [shared](const Element& a) -> std::vector<std::size_t> {
        auto it = shared->find(a);
        if (it == shared->end()) return {};
        std::vector<std::size_t> idx(it->second.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        return idx;
      },
      [shared](const Element& a, std::size_t i) -> std::vector<Element> {
        auto it = shared->find(a);
        if (it == shared->end() || i >= it->second.size()) return {};
        return it->second[i];
      },
      Provenance::ExplicitGraph);
}

SingletonAxiomSet transform_axioms(SingletonAxiomSet s, Subset u) {
  auto base = std::make_shared<SingletonAxiomSet>(std::move(s));
  auto cut = std::make_shared<Subset>(std::move(u));
  Provenance origin = base->origin();
  return SingletonAxiomSet(
      [base, cut](const Element& a) -> std::vector<Element> {
        if (cut->member(a)) return {};
        return base->children(a);
      },
      origin);
}

}  // namespace topo
