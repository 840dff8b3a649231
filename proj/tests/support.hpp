#ifndef TOPOCOVER_TESTS_SUPPORT_HPP
#define TOPOCOVER_TESTS_SUPPORT_HPP

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "topocover/axioms.hpp"
#include "topocover/element.hpp"
#include "topocover/eval.hpp"
#include "topocover/subset.hpp"

namespace testutil {

using topo::Element;
using topo::Functional;
using topo::SingletonAxiomSet;
using topo::Subset;
using topo::Value;

inline Element nat(std::uint64_t n) { return Element::nat(n); }
inline Element atom(const std::string& name) { return Element::atom(name); }

// Axiom set of the Fibonacci call relation over all naturals:
// children(0) = children(1) = {}, children(n+2) = {n, n+1}.
inline SingletonAxiomSet fib_axioms() {
  return SingletonAxiomSet([](const Element& a) -> std::vector<Element> {
    if (!a.is_nat() || a.nat_value() < 2) return {};
    return {Element::nat(a.nat_value() - 2), Element::nat(a.nat_value() - 1)};
  });
}

inline Functional h_fib() {
  return Functional(
      [](const Element& a, const Functional::Recurse& f) -> Value {
        std::uint64_t n = a.nat_value();
        if (n == 0) return Element::nat(0);
        if (n == 1) return Element::nat(1);
        std::uint64_t lo = f(Element::nat(n - 2)).nat_value();
        std::uint64_t hi = f(Element::nat(n - 1)).nat_value();
        return Element::nat(lo + hi);
      });
}

// Independent iterative oracle.
inline std::uint64_t fib_oracle(std::uint64_t n) {
  std::uint64_t a = 0;
  std::uint64_t b = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t next = a + b;
    a = b;
    b = next;
  }
  return a;
}

struct RandomGraph {
  std::vector<Element> nodes;
  std::map<Element, std::vector<Element>> adjacency;
  SingletonAxiomSet axioms;
};

inline RandomGraph random_graph(std::mt19937_64& rng,
                                std::size_t max_nodes = 30,
                                std::size_t max_degree = 4) {
  std::size_t n = 1 + rng() % max_nodes;
  std::vector<Element> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back(Element::atom("n" + std::to_string(i)));
  }
  std::map<Element, std::vector<Element>> adjacency;
  for (const Element& node : nodes) {
    std::size_t degree = rng() % (max_degree + 1);
    std::set<Element> children;
    for (std::size_t d = 0; d < degree; ++d) {
      children.insert(nodes[rng() % n]);
    }
    adjacency[node] = std::vector<Element>(children.begin(), children.end());
  }
  auto axioms = topo::from_explicit_graph(adjacency);
  return RandomGraph{std::move(nodes), std::move(adjacency),
                     std::move(axioms)};
}

// Edges only from lower to higher node numbers, hence acyclic.
inline RandomGraph random_dag(std::mt19937_64& rng,
                              std::size_t max_nodes = 30,
                              std::size_t max_degree = 4) {
  std::size_t n = 1 + rng() % max_nodes;
  std::vector<Element> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back(Element::atom("n" + std::to_string(i)));
  }
  std::map<Element, std::vector<Element>> adjacency;
  for (std::size_t i = 0; i < n; ++i) {
    std::set<Element> children;
    if (i + 1 < n) {
      std::size_t degree = rng() % (max_degree + 1);
      for (std::size_t d = 0; d < degree; ++d) {
        std::size_t j = i + 1 + rng() % (n - i - 1);
        children.insert(nodes[j]);
      }
    }
    adjacency[nodes[i]] =
        std::vector<Element>(children.begin(), children.end());
  }
  auto axioms = topo::from_explicit_graph(adjacency);
  return RandomGraph{std::move(nodes), std::move(adjacency),
                     std::move(axioms)};
}

inline Subset random_node_subset(std::mt19937_64& rng,
                                 const std::vector<Element>& nodes,
                                 double density) {
  std::vector<Element> members;
  for (const Element& node : nodes) {
    if (std::uniform_real_distribution<double>(0, 1)(rng) < density) {
      members.push_back(node);
    }
  }
  return Subset::finite(std::move(members));
}

// Brute-force oracle: is any cycle reachable from root, walking only
// through elements outside `avoid`? Three-colour depth-first walk over
// the raw adjacency map, independent of the derivation engine.
inline bool cycle_reachable(
    const std::map<Element, std::vector<Element>>& adjacency,
    const Element& root, const Subset& avoid = Subset::empty()) {
  enum class Colour { Grey, Black };
  std::map<Element, Colour> colour;
  struct Frame {
    Element node;
    std::size_t next = 0;
  };
  if (avoid.member(root)) return false;
  std::vector<Frame> stack{{root, 0}};
  colour[root] = Colour::Grey;
  static const std::vector<Element> kNoChildren;
  while (!stack.empty()) {
    Frame& top = stack.back();
    auto it = adjacency.find(top.node);
    const std::vector<Element>& children =
        it == adjacency.end() ? kNoChildren : it->second;
    if (top.next >= children.size()) {
      colour[top.node] = Colour::Black;
      stack.pop_back();
      continue;
    }
    Element child = children[top.next++];
    if (avoid.member(child)) continue;
    auto seen = colour.find(child);
    if (seen == colour.end()) {
      colour[child] = Colour::Grey;
      stack.push_back({child, 0});
    } else if (seen->second == Colour::Grey) {
      return true;
    }
  }
  return false;
}

inline const char* kFibSource =
    "fn fib(n) {\n"
    "  0 -> 0;\n"
    "  1 -> 1;\n"
    "  n + 2 -> fib(n + 1) + fib(n);\n"
    "}\n";

inline const char* kChoiceSource =
    "fn f(n) {\n"
    "  0 -> 0;\n"
    "  1 -> 1;\n"
    "  n + 2 -> f(n) | f(n + 1);\n"
    "}\n";

inline const char* kLoopSource = "fn f(n) { n -> f(n); }\n";

inline const char* kSuccSource = "fn f(n) { n -> f(n + 1) + 1; }\n";

}  // namespace testutil

#endif
