#include <random>

#include "doctest.h"
#include "support.hpp"
#include "topocover/derive.hpp"
#include "topocover/error.hpp"
#include "topocover/positivity.hpp"

using namespace topo;
using testutil::atom;
using testutil::nat;

TEST_CASE("positivity: self-loop is positive with a lasso") {
  Element a = atom("a");
  auto s = from_relation({{a, a}});
  auto result = positivity(s, Subset::universal(), a, 100);
  REQUIRE(result.is_positive());
  CHECK(result.witness().set == std::vector<Element>{a});
  REQUIRE(result.lasso().has_value());
  CHECK(result.lasso()->stem.empty());
  CHECK(result.lasso()->cycle == std::vector<Element>{a});
  CHECK(check_coinduction(s, Subset::universal(), result.witness(), a));
  CHECK(lasso_witnesses_positivity(s, Subset::universal(), a,
                                   *result.lasso()));
}

TEST_CASE("positivity: terminating fib input is not positive") {
  auto fib = testutil::fib_axioms();
  CHECK(positivity(fib, Subset::universal(), nat(9), 1000).is_not_positive());
}

TEST_CASE("positivity: elimination drains an f-starved cycle") {
  // 0 <-> 1 but F = {0}: 1 dies for lack of membership, then 0 for
  // lack of a surviving child.
  auto s = from_relation({{nat(0), nat(1)}, {nat(1), nat(0)}});
  auto result = positivity(s, Subset::finite({nat(0)}), nat(0), 100);
  CHECK(result.is_not_positive());
}

TEST_CASE("positivity: budget exhaustion is Unknown") {
  auto succ = SingletonAxiomSet([](const Element& a) {
    return std::vector<Element>{Element::nat(a.nat_value() + 1)};
  });
  auto result = positivity(succ, Subset::universal(), nat(0), 100);
  CHECK(result.is_unknown());
  CHECK_THROWS_AS(positivity(succ, Subset::universal(), nat(0), 0), Error);
}

TEST_CASE("check_coinduction: examples") {
  Element a = atom("a");
  Element b = atom("b");
  auto loop = from_relation({{a, a}});
  CHECK(check_coinduction(loop, Subset::universal(), {{a}}, a));
  CHECK_FALSE(check_coinduction(loop, Subset::universal(), {{}}, a));

  auto ab = from_relation({{a, b}});
  CHECK_FALSE(check_coinduction(ab, Subset::universal(), {{a, b}}, a));

  // P must sit inside F.
  CHECK_FALSE(check_coinduction(loop, Subset::finite({b}), {{a}}, a));
}

TEST_CASE("check_coinduction over indexed axioms") {
  // Every index needs a child in P; index 1 of 'a' has none in {a,b}.
  Element a = atom("a");
  Element b = atom("b");
  Element c = atom("c");
  auto s = from_explicit_indexed_graph(
      {{a, {{b}, {c}}}, {b, {{a}}}, {c, {}}});
  CHECK_FALSE(check_coinduction(s, Subset::universal(), {{a, b}}, a));
  auto with_c = from_explicit_indexed_graph(
      {{a, {{b}, {a}}}, {b, {{a}}}});
  CHECK(check_coinduction(with_c, Subset::universal(), {{a, b}}, a));
}

TEST_CASE("infinite_chain") {
  Element a = atom("a");
  auto loop = from_relation({{a, a}});
  auto chain = infinite_chain(loop, a, 100);
  REQUIRE(chain.has_value());
  CHECK(chain->cycle == std::vector<Element>{a});

  auto fib = testutil::fib_axioms();
  CHECK_FALSE(infinite_chain(fib, nat(6), 1000).has_value());

  auto succ = SingletonAxiomSet([](const Element& e) {
    return std::vector<Element>{Element::nat(e.nat_value() + 1)};
  });
  try {
    infinite_chain(succ, nat(0), 100);
    FAIL("expected BudgetExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BudgetExhausted);
  }
}

TEST_CASE("positivity: duality with cover on finite graphs") {
  std::mt19937_64 rng(61);
  for (int round = 0; round < 300; ++round) {
    auto graph = testutil::random_graph(rng);
    Element root = graph.nodes[rng() % graph.nodes.size()];
    auto covered = derive(graph.axioms, Subset::empty(), root, 100000);
    auto positive = positivity(graph.axioms, Subset::universal(), root,
                               100000);
    REQUIRE_FALSE(covered.is_unknown());
    REQUIRE_FALSE(positive.is_unknown());
    CHECK(covered.is_covered() == positive.is_not_positive());
    if (positive.is_positive()) {
      CHECK(check_coinduction(graph.axioms, Subset::universal(),
                              positive.witness(), root));
      REQUIRE(positive.lasso().has_value());
      CHECK(lasso_witnesses_positivity(graph.axioms, Subset::universal(),
                                       root, *positive.lasso()));
    }
  }
}

TEST_CASE("positivity: monotone in the filter set") {
  std::mt19937_64 rng(67);
  for (int round = 0; round < 150; ++round) {
    auto graph = testutil::random_graph(rng, 15);
    Element root = graph.nodes[rng() % graph.nodes.size()];
    Subset small = testutil::random_node_subset(rng, graph.nodes, 0.5);
    // Grow `small` into a superset.
    std::vector<Element> grown = small.elements();
    for (const Element& node : graph.nodes) {
      if (rng() % 2 == 0) grown.push_back(node);
    }
    Subset large = Subset::finite(grown);
    auto with_small = positivity(graph.axioms, small, root, 100000);
    auto with_large = positivity(graph.axioms, large, root, 100000);
    if (with_small.is_positive()) {
      CHECK(with_large.is_positive());
    }
  }
}

TEST_CASE("positivity: indexed strategy witness without a lasso") {
  Element a = atom("a");
  Element b = atom("b");
  auto s = from_explicit_indexed_graph({{a, {{b}, {a}}}, {b, {{a}}}});
  auto result = positivity(s, Subset::universal(), a, 100);
  REQUIRE(result.is_positive());
  CHECK_FALSE(result.lasso().has_value());
  CHECK(check_coinduction(s, Subset::universal(), result.witness(), a));
}
