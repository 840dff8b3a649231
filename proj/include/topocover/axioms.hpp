#ifndef TOPOCOVER_AXIOMS_HPP
#define TOPOCOVER_AXIOMS_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "topocover/element.hpp"
#include "topocover/subset.hpp"

namespace topo {

enum class Provenance { ExplicitGraph, FromRelation, FromProgram, Builtin };

/// The C(-) data of a singleton inductively generated formal topology:
/// one axiom per element, given as a children provider. Providers must
/// be pure and deterministic and must return canonically sorted,
/// duplicate-free lists; the search, checking and evaluation layers all
/// rely on that ordering to keep proof shapes reproducible.
class SingletonAxiomSet {
 public:
  using ChildrenFn = std::function<std::vector<Element>(const Element&)>;

  explicit SingletonAxiomSet(ChildrenFn children,
                             Provenance origin = Provenance::Builtin)
      : children_(std::move(children)), origin_(origin) {}

  std::vector<Element> children(const Element& a) const {
    return children_(a);
  }

  Provenance origin() const { return origin_; }

 private:
  ChildrenFn children_;
  Provenance origin_;
};

/// The I(-), C(-,-) data of a general inductively generated formal
/// topology. indexes(a) may be empty, in which case no infinity rule
/// applies at a. A singleton set embeds as indexes(a) = {0} everywhere.
class IndexedAxiomSet {
 public:
  using IndexesFn = std::function<std::vector<std::size_t>(const Element&)>;
  using ChildrenFn =
      std::function<std::vector<Element>(const Element&, std::size_t)>;

  IndexedAxiomSet(IndexesFn indexes, ChildrenFn children,
                  Provenance origin = Provenance::Builtin)
      : indexes_(std::move(indexes)),
        children_(std::move(children)),
        origin_(origin) {}

  std::vector<std::size_t> indexes(const Element& a) const {
    return indexes_(a);
  }

  std::vector<Element> children(const Element& a, std::size_t index) const {
    return children_(a, index);
  }

  Provenance origin() const { return origin_; }

  static IndexedAxiomSet from_singleton(SingletonAxiomSet s);

 private:
  IndexesFn indexes_;
  ChildrenFn children_;
  Provenance origin_;
};

/// Axiom set of the relation R: children(a) = { y | (a, y) in pairs },
/// sorted and deduplicated; empty for elements never on the left.
SingletonAxiomSet from_relation(
    const std::vector<std::pair<Element, Element>>& pairs);

/// Explicit adjacency map; absent keys have no children. Lists are
/// sorted and deduplicated on construction.
SingletonAxiomSet from_explicit_graph(
    std::map<Element, std::vector<Element>> adjacency);

/// Explicit indexed adjacency: element -> one child list per index.
IndexedAxiomSet from_explicit_indexed_graph(
    std::map<Element, std::vector<std::vector<Element>>> adjacency);

/// The relativisation C'(a) = {} if a in u, else C(a). Covering by u in
/// the original set coincides with covering by the empty set here.
SingletonAxiomSet transform_axioms(SingletonAxiomSet s, Subset u);

}  // namespace topo

#endif
