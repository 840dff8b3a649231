#include "topocover/json_io.hpp"

#include <string>

#include "topocover/error.hpp"

namespace topo {

namespace {

[[noreturn]] void bad(const std::string& message) {
  throw Error(Errc::InvalidJson, message);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    bad(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::vector<Element> element_list_from_json(const Json& j,
                                            const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  std::vector<Element> out;
  out.reserve(j.size());
  for (const Json& item : j) out.push_back(element_from_json(item));
  return out;
}

Json element_list_to_json(const std::vector<Element>& xs) {
  Json out = Json::array();
  for (const Element& e : xs) out.push_back(e.encode());
  return out;
}

}  // namespace

Json parse_json(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) bad("malformed JSON");
  return j;
}

Json element_to_json(const Element& e) { return e.encode(); }

Element element_from_json(const Json& j) {
  if (!j.is_string()) bad("element must be an encoded string");
  Element::ParseError err;
  auto e = Element::parse(j.get<std::string>(), &err);
  if (!e) {
    bad("bad element encoding \"" + j.get<std::string>() + "\": " +
        err.message);
  }
  return *e;
}

Json subset_to_json(const Subset& u) {
  switch (u.kind()) {
    case Subset::Kind::Finite:
      return Json{{"finite", element_list_to_json(u.elements())}};
    case Subset::Kind::Comparator: {
      Json cmp;
      switch (u.cmp_kind()) {
        case Subset::CmpKind::Even: cmp["kind"] = "even"; break;
        case Subset::CmpKind::Odd: cmp["kind"] = "odd"; break;
        case Subset::CmpKind::LessThan:
          cmp["kind"] = "lt";
          cmp["k"] = u.cmp_bound();
          break;
        case Subset::CmpKind::AtLeast:
          cmp["kind"] = "atleast";
          cmp["k"] = u.cmp_bound();
          break;
      }
      return Json{{"cmp", cmp}};
    }
    case Subset::Kind::Compound: {
      Json args = Json::array();
      for (const Subset& s : u.operands()) args.push_back(subset_to_json(s));
      const char* op = u.op() == Subset::Op::Union          ? "union"
                       : u.op() == Subset::Op::Intersection ? "intersection"
                                                            : "complement";
      return Json{{"op", op}, {"args", args}};
    }
  }
  bad("unreachable subset kind");
}

Subset subset_from_json(const Json& j) {
  if (!j.is_object()) bad("subset must be an object");
  if (j.contains("finite")) {
    return Subset::finite(element_list_from_json(j.at("finite"), "finite"));
  }
  if (j.contains("cmp")) {
    const Json& cmp = j.at("cmp");
    std::string kind = field(cmp, "kind").get<std::string>();
    if (kind == "even") return Subset::even();
    if (kind == "odd") return Subset::odd();
    if (kind == "lt") {
      return Subset::less_than(field(cmp, "k").get<std::uint64_t>());
    }
    if (kind == "atleast") {
      return Subset::at_least(field(cmp, "k").get<std::uint64_t>());
    }
    bad("unknown comparator kind \"" + kind + "\"");
  }
  if (j.contains("op")) {
    std::string op = j.at("op").get<std::string>();
    std::vector<Subset> args;
    for (const Json& arg : field(j, "args")) {
      args.push_back(subset_from_json(arg));
    }
    if (op == "union") return Subset::union_of(std::move(args));
    if (op == "intersection") return Subset::intersection_of(std::move(args));
    if (op == "complement") {
      if (args.size() != 1) bad("complement takes exactly one argument");
      return Subset::complement(std::move(args[0]));
    }
    bad("unknown subset op \"" + op + "\"");
  }
  bad("subset must have \"finite\", \"cmp\" or \"op\"");
}

Json proof_to_json(const ProofPtr& p) {
  if (!p) bad("null proof");
  Json out;
  out["element"] = p->element().encode();
  if (p->rule() == CoverProof::Rule::Refl) {
    out["rule"] = "refl";
    return out;
  }
  out["rule"] = "inf";
  out["index"] = p->index();
  Json children = Json::array();
  for (const ProofPtr& k : p->children()) children.push_back(proof_to_json(k));
  out["children"] = std::move(children);
  return out;
}

ProofPtr proof_from_json(const Json& j) {
  Element element = element_from_json(field(j, "element"));
  std::string rule = field(j, "rule").get<std::string>();
  if (rule == "refl") return CoverProof::refl(std::move(element));
  if (rule != "inf") bad("unknown proof rule \"" + rule + "\"");
  std::size_t index = field(j, "index").get<std::size_t>();
  std::vector<ProofPtr> children;
  for (const Json& k : field(j, "children")) {
    children.push_back(proof_from_json(k));
  }
  return CoverProof::inf(std::move(element), index, std::move(children));
}

Json lasso_to_json(const LassoWitness& w) {
  return Json{{"lasso", Json{{"stem", element_list_to_json(w.stem)},
                             {"cycle", element_list_to_json(w.cycle)}}}};
}

LassoWitness lasso_from_json(const Json& j) {
  const Json& lasso = j.contains("lasso") ? j.at("lasso") : j;
  LassoWitness w;
  w.stem = element_list_from_json(field(lasso, "stem"), "stem");
  w.cycle = element_list_from_json(field(lasso, "cycle"), "cycle");
  if (w.cycle.empty()) bad("lasso cycle must be non-empty");
  return w;
}

Json uncovered_set_to_json(const UncoveredSetWitness& w) {
  return Json{{"uncoveredSet", element_list_to_json(w.set)}};
}

UncoveredSetWitness uncovered_set_from_json(const Json& j) {
  UncoveredSetWitness w;
  w.set = element_list_from_json(field(j, "uncoveredSet"), "uncoveredSet");
  return w;
}

Json positivity_witness_to_json(const CoinductionWitness& witness,
                                const std::optional<LassoWitness>& lasso) {
  Json out;
  out["coinductionSet"] = element_list_to_json(witness.set);
  if (lasso) out["lasso"] = lasso_to_json(*lasso).at("lasso");
  return out;
}

Json oracle_to_json(const OracleTable& table) {
  Json entries = Json::array();
  for (const auto& [key, value] : table.entries()) {
    entries.push_back(Json{{"key", key.encode()}, {"value", value.encode()}});
  }
  return Json{{"entries", entries}};
}

OracleTable oracle_from_json(const Json& j) {
  std::map<Element, Value> entries;
  for (const Json& entry : field(j, "entries")) {
    Element key = element_from_json(field(entry, "key"));
    Value value = element_from_json(field(entry, "value"));
    if (!entries.emplace(std::move(key), std::move(value)).second) {
      bad("duplicate oracle key");
    }
  }
  return OracleTable(std::move(entries));
}

GraphInput graph_from_json(const Json& j) {
  if (!j.is_object()) bad("graph must be an object");
  GraphInput out;
  if (j.contains("indexed")) {
    const Json& idx = j.at("indexed");
    if (!idx.is_object()) bad("\"indexed\" must map elements to index lists");
    std::map<Element, std::vector<std::vector<Element>>> adjacency;
    for (const auto& [key, lists] : idx.items()) {
      Element::ParseError err;
      auto node = Element::parse(key, &err);
      if (!node) bad("bad element encoding \"" + key + "\": " + err.message);
      if (!lists.is_array()) bad("index lists must be arrays");
      std::vector<std::vector<Element>> per_index;
      for (const Json& list : lists) {
        per_index.push_back(element_list_from_json(list, "children"));
      }
      adjacency.emplace(std::move(*node), std::move(per_index));
    }
    out.indexed = from_explicit_indexed_graph(std::move(adjacency));
    return out;
  }
  if (j.contains("edges")) {
    std::vector<std::pair<Element, Element>> pairs;
    for (const Json& edge : j.at("edges")) {
      if (!edge.is_array() || edge.size() != 2) {
        bad("each edge must be a [from, to] pair");
      }
      pairs.emplace_back(element_from_json(edge.at(0)),
                         element_from_json(edge.at(1)));
    }
    out.singleton = from_relation(pairs);
    return out;
  }
  bad("graph must have \"edges\" or \"indexed\"");
}

}  // namespace topo
