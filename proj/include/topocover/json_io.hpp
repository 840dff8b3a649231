#ifndef TOPOCOVER_JSON_IO_HPP
#define TOPOCOVER_JSON_IO_HPP

#include <optional>

#include "json.hpp"
#include "topocover/axioms.hpp"
#include "topocover/derive.hpp"
#include "topocover/element.hpp"
#include "topocover/eval.hpp"
#include "topocover/positivity.hpp"
#include "topocover/proof.hpp"
#include "topocover/subset.hpp"

namespace topo {

/// Key order is preserved so identical inputs serialize byte-stably.
using Json = nlohmann::ordered_json;

// Elements travel as their canonical text encoding.
Json element_to_json(const Element& e);
Element element_from_json(const Json& j);

// {"finite": [...]} | {"cmp": {"kind": ..., "k": ...}}
// | {"op": "union"|"intersection"|"complement", "args": [...]}
Json subset_to_json(const Subset& u);
Subset subset_from_json(const Json& j);

// {"element": enc, "rule": "refl"}
// | {"element": enc, "rule": "inf", "index": i, "children": [...]}
Json proof_to_json(const ProofPtr& p);
ProofPtr proof_from_json(const Json& j);

// {"lasso": {"stem": [...], "cycle": [...]}}
Json lasso_to_json(const LassoWitness& w);
LassoWitness lasso_from_json(const Json& j);

// {"uncoveredSet": [...]}
Json uncovered_set_to_json(const UncoveredSetWitness& w);
UncoveredSetWitness uncovered_set_from_json(const Json& j);

// {"coinductionSet": [...], "lasso": {...}?}
Json positivity_witness_to_json(const CoinductionWitness& witness,
                                const std::optional<LassoWitness>& lasso);

// {"entries": [{"key": enc, "value": enc}, ...]}
Json oracle_to_json(const OracleTable& table);
OracleTable oracle_from_json(const Json& j);

/// Explicit-graph input: {"edges": [["a","b"], ...]} for a singleton
/// set, or {"indexed": {"a": [["b","c"], ["d"]], ...}} mapping each
/// element to one child list per index. Exactly one is populated.
struct GraphInput {
  std::optional<SingletonAxiomSet> singleton;
  std::optional<IndexedAxiomSet> indexed;
};
GraphInput graph_from_json(const Json& j);

/// Wrapper over Json::parse that reports Error(InvalidJson) instead of
/// throwing nlohmann's exception types across the API.
Json parse_json(const std::string& text);

}  // namespace topo

#endif
