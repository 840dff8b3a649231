// Command-line front end: termination certificates, divergence
// witnesses, certified/extracted/relative evaluation and outcome
// enumeration over recursive programs or explicit graphs, with JSON
// artifacts suitable for re-checking.

#include <pthread.h>

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "topocover/derive.hpp"
#include "topocover/dsl.hpp"
#include "topocover/error.hpp"
#include "topocover/eval.hpp"
#include "topocover/json_io.hpp"
#include "topocover/positivity.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace topo;

// Certificates serialize as trees; shared subderivations unfold, so a
// hard cap keeps pathological inputs from producing gigabyte files.
constexpr std::uint64_t kCertificateEmitLimit = 1'000'000;

constexpr std::uint64_t kDefaultBudget = 100'000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string source;
  std::string fn;
  std::string input;
  std::string range;
  std::string subset_json;
  std::string mode = "certified";
  std::string oracle;
  std::string cert_path;
  std::string format;
  std::string out_path;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t fuel = kDefaultBudget;
};

// ---------------------------------------------------------------------------
// Input loading

struct Target {
  bool is_program = false;
  bool deterministic = false;
  std::string fn_name;
  std::size_t arity = 1;
  std::optional<dsl::Lowered> program;                  // any program
  std::optional<dsl::LoweredSingleton> program_single;  // choice-free only
  std::optional<SingletonAxiomSet> graph;
  std::optional<IndexedAxiomSet> graph_indexed;

  bool has_singleton_view() const {
    return program_single.has_value() || graph.has_value();
  }
  const SingletonAxiomSet& singleton_view() const {
    return program_single ? program_single->axioms : *graph;
  }
  const IndexedAxiomSet& indexed_view() const {
    return program ? program->axioms : *graph_indexed;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{';
  }
  return false;
}

std::string position_of(const dsl::SourcePos& pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

Target load_target(const Options& opts) {
  Target target;
  std::string text =
      looks_like_json(opts.source) ? opts.source : read_file(opts.source);
  if (looks_like_json(text)) {
    GraphInput graph = graph_from_json(parse_json(text));
    if (graph.singleton) {
      target.graph = std::move(graph.singleton);
    } else {
      target.graph_indexed = std::move(graph.indexed);
    }
    return target;
  }

  auto parsed = dsl::parse(text);
  if (!parsed.ok()) {
    throw UsageError("parse error at " + position_of(parsed.error->pos) +
                     ": " + parsed.error->message);
  }
  const dsl::Program& program = *parsed.program;

  auto violations = dsl::validate(program);
  std::string errors;
  for (const dsl::Violation& v : violations) {
    std::string line = v.function_name + " at " + position_of(v.pos) + ": " +
                       dsl::violation_kind_name(v.kind) + ": " + v.message;
    if (v.warning) {
      std::cerr << "warning: " << line << "\n";
    } else {
      errors += (errors.empty() ? "" : "\n") + line;
    }
  }
  if (!errors.empty()) throw UsageError(errors);

  std::string fn = opts.fn;
  if (fn.empty()) {
    if (program.functions.size() != 1) {
      throw UsageError(
          "program defines several functions; pick one with --fn");
    }
    fn = program.functions[0].name;
  }
  if (!program.find(fn)) throw UsageError("no function named '" + fn + "'");

  target.is_program = true;
  target.fn_name = fn;
  target.program = dsl::lower(program, fn);
  target.arity = target.program->arity;
  target.deterministic = dsl::is_deterministic(program, fn);
  if (target.deterministic) {
    target.program_single = dsl::lower_singleton(program, fn);
  }
  return target;
}

Element normalize_input(const Target& target, Element e) {
  if (!target.is_program) return e;
  if (target.arity == 1) {
    if (e.is_tuple() && e.items().size() == 1) return e.items()[0];
    return e;
  }
  if (!e.is_tuple() || e.items().size() != target.arity) {
    throw UsageError("'" + target.fn_name + "' takes " +
                     std::to_string(target.arity) +
                     " arguments; pass them as a tuple, e.g. (1,2)");
  }
  return e;
}

Element parse_input(const Target& target, const std::string& text) {
  Element::ParseError err;
  auto e = Element::parse(text, &err);
  if (!e) {
    throw UsageError("bad --input \"" + text + "\": " + err.message);
  }
  return normalize_input(target, std::move(*e));
}

Subset parse_subset(const std::string& text, const Subset& fallback) {
  if (text.empty()) return fallback;
  return subset_from_json(parse_json(text));
}

OracleTable load_oracle(const Target& target, const std::string& value) {
  if (value.empty()) return OracleTable{};
  std::string text = looks_like_json(value) ? value : read_file(value);
  OracleTable raw = oracle_from_json(parse_json(text));
  std::map<Element, Value> normalized;
  for (const auto& [key, val] : raw.entries()) {
    normalized.emplace(normalize_input(target, key), val);
  }
  return OracleTable(std::move(normalized));
}

// ---------------------------------------------------------------------------
// Output

void emit(const Options& opts, const std::string& default_format,
          const Json& doc, const std::string& text) {
  std::string format = opts.format.empty() ? default_format : opts.format;
  std::string payload = format == "json" ? doc.dump(2) + "\n" : text;
  if (opts.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + opts.out_path);
  out << payload;
}

std::string join_elements(const std::vector<Element>& xs) {
  std::string out;
  for (const Element& e : xs) {
    if (!out.empty()) out += " ";
    out += e.encode();
  }
  return out;
}

void attach_cover_payload(Json& doc, std::string& text,
                          const CoverResult& result) {
  switch (result.status()) {
    case CoverResult::Status::Covered: {
      doc["result"] = "covered";
      const ProofPtr& p = result.proof();
      if (p->unfolded_size() <= kCertificateEmitLimit) {
        doc["certificate"] = proof_to_json(p);
      } else {
        doc["certificate"] = nullptr;
        doc["certificateOmitted"] = Json{{"unfoldedSize", p->unfolded_size()},
                                         {"limit", kCertificateEmitLimit}};
      }
      text += "covered: certificate of height " +
              std::to_string(p->height()) + ", " +
              std::to_string(p->unfolded_size()) + " tree nodes\n";
      break;
    }
    case CoverResult::Status::Uncovered:
      doc["result"] = "uncovered";
      if (result.lasso()) {
        doc["witness"] = lasso_to_json(*result.lasso());
        text += "uncovered: lasso stem [" +
                join_elements(result.lasso()->stem) + "] cycle [" +
                join_elements(result.lasso()->cycle) + "]\n";
      } else {
        doc["witness"] = uncovered_set_to_json(*result.uncovered_set());
        text += "uncovered: set {" +
                join_elements(result.uncovered_set()->set) + "}\n";
      }
      break;
    case CoverResult::Status::Unknown:
      doc["result"] = "unknown";
      doc["explored"] = result.explored();
      doc["budget"] = result.budget();
      text += "unknown: explored " + std::to_string(result.explored()) +
              " elements of budget " + std::to_string(result.budget()) + "\n";
      break;
  }
}

int cover_exit_code(const CoverResult& result) {
  switch (result.status()) {
    case CoverResult::Status::Covered: return 0;
    case CoverResult::Status::Uncovered: return 1;
    case CoverResult::Status::Unknown: return 2;
  }
  return 3;
}

// ---------------------------------------------------------------------------
// Commands

CoverResult derive_for(const Target& target, const Subset& u,
                       const Element& root, std::uint64_t budget) {
  if (target.has_singleton_view()) {
    return derive(target.singleton_view(), u, root, budget);
  }
  return derive(target.indexed_view(), u, root, budget);
}

int cmd_check(const Options& opts) {
  Target target = load_target(opts);
  Subset u = parse_subset(opts.subset_json, Subset::empty());

  if (!opts.range.empty()) {
    if (!opts.input.empty()) {
      throw UsageError("--input and --range are mutually exclusive");
    }
    auto dots = opts.range.find("..");
    if (dots == std::string::npos) throw UsageError("--range expects A..B");
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    try {
      lo = std::stoull(opts.range.substr(0, dots));
      hi = std::stoull(opts.range.substr(dots + 2));
    } catch (const std::exception&) {
      throw UsageError("--range expects natural bounds A..B");
    }
    if (lo > hi) throw UsageError("--range bounds out of order");
    if (hi - lo >= 100000) throw UsageError("--range spans too many inputs");
    if (target.is_program && target.arity != 1) {
      throw UsageError("--range requires a single-argument function");
    }

    std::size_t count = static_cast<std::size_t>(hi - lo + 1);
    std::vector<std::optional<CoverResult>> results(count);
    std::vector<std::string> errors(count);
    // Independent derivations over shared immutable axiom sets; the
    // output order is fixed afterwards, so scheduling cannot change it.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long offset = 0; offset < static_cast<long long>(count);
         ++offset) {
      Element root = Element::nat(lo + static_cast<std::uint64_t>(offset));
      try {
        results[offset] = derive_for(target, u, root, opts.budget);
      } catch (const std::exception& e) {
        errors[offset] = e.what();
      }
    }
    for (const std::string& error : errors) {
      if (!error.empty()) throw UsageError(error);
    }

    Json doc;
    doc["query"] = Json{{"u", subset_to_json(u)}, {"range", opts.range}};
    Json items = Json::array();
    std::string text;
    int exit_code = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const CoverResult& result = *results[i];
      Element root = Element::nat(lo + i);
      Json item;
      item["root"] = root.encode();
      std::string line = root.encode() + ": ";
      attach_cover_payload(item, line, result);
      items.push_back(std::move(item));
      text += line;
      int code = cover_exit_code(result);
      // Unknown dominates uncovered dominates covered.
      if (code == 2 || (code == 1 && exit_code != 2)) exit_code = code;
    }
    doc["results"] = std::move(items);
    emit(opts, "json", doc, text);
    return exit_code;
  }

  if (opts.input.empty()) throw UsageError("check needs --input or --range");
  Element root = parse_input(target, opts.input);
  CoverResult result = derive_for(target, u, root, opts.budget);

  Json doc;
  doc["query"] = Json{{"u", subset_to_json(u)}, {"root", root.encode()}};
  std::string text;
  attach_cover_payload(doc, text, result);
  emit(opts, "json", doc, text);
  return cover_exit_code(result);
}

ProofPtr load_certificate(const std::string& path) {
  Json doc = parse_json(read_file(path));
  if (doc.is_object() && doc.contains("certificate")) {
    if (doc.at("certificate").is_null()) {
      throw UsageError("result document has no embedded certificate");
    }
    return proof_from_json(doc.at("certificate"));
  }
  return proof_from_json(doc);
}

int cmd_run(const Options& opts) {
  Target target = load_target(opts);
  if (!target.is_program || !target.program_single) {
    throw UsageError(
        "run needs a deterministic program source (use enumerate for "
        "nondeterministic ones)");
  }
  if (opts.input.empty()) throw UsageError("run needs --input");
  Element root = parse_input(target, opts.input);
  const dsl::LoweredSingleton& lowered = *target.program_single;

  Json doc;
  doc["query"] = Json{{"root", root.encode()}, {"mode", opts.mode}};

  if (opts.mode == "certified") {
    ProofPtr certificate;
    if (!opts.cert_path.empty()) {
      certificate = load_certificate(opts.cert_path);
    } else {
      CoverResult derived =
          derive(lowered.axioms, Subset::empty(), root, opts.budget);
      if (!derived.is_covered()) {
        // Refuse to run: no certificate, no evaluation.
        std::string text;
        attach_cover_payload(doc, text, derived);
        emit(opts, "text", doc, text);
        return cover_exit_code(derived);
      }
      certificate = derived.proof();
    }
    Value value =
        eval_certified(lowered.functional, lowered.axioms, root, certificate);
    doc["result"] = "value";
    doc["value"] = value.encode();
    emit(opts, "text", doc, value.encode() + "\n");
    return 0;
  }

  EvalResult result = [&] {
    if (opts.mode == "extracted") {
      return eval_extracted(lowered.functional, lowered.axioms, root,
                            opts.fuel);
    }
    if (opts.mode == "relative") {
      OracleTable table = load_oracle(target, opts.oracle);
      return eval_relative(lowered.functional, lowered.axioms, root, table,
                           opts.fuel);
    }
    throw UsageError("unknown --mode '" + opts.mode + "'");
  }();

  if (result.diverged()) {
    doc["result"] = "divergence";
    doc["reason"] =
        result.divergence().reason == Divergence::Reason::FuelExhausted
            ? "fuelExhausted"
            : "cyclicCall";
    emit(opts, "text", doc,
         "divergence (" + doc["reason"].get<std::string>() + ")\n");
    return 1;
  }
  doc["result"] = "value";
  doc["value"] = result.value().encode();
  emit(opts, "text", doc, result.value().encode() + "\n");
  return 0;
}

int cmd_verify_cert(const Options& opts) {
  Target target = load_target(opts);
  Json doc = parse_json(read_file(opts.cert_path));

  Json cert_json;
  std::optional<Subset> u;
  std::optional<Element> root;
  if (doc.is_object() && doc.contains("certificate")) {
    if (doc.at("certificate").is_null()) {
      throw UsageError("result document has no embedded certificate");
    }
    cert_json = doc.at("certificate");
    if (doc.contains("query")) {
      const Json& query = doc.at("query");
      if (query.contains("u")) u = subset_from_json(query.at("u"));
      if (query.contains("root")) root = element_from_json(query.at("root"));
    }
  } else {
    cert_json = doc;
  }
  ProofPtr certificate = proof_from_json(cert_json);
  if (!opts.subset_json.empty()) {
    u = subset_from_json(parse_json(opts.subset_json));
  }
  if (!opts.input.empty()) root = parse_input(target, opts.input);
  if (!u) u = Subset::empty();
  if (!root) root = certificate->element();

  CheckResult result =
      target.has_singleton_view()
          ? check_proof(target.singleton_view(), *u, *root, certificate)
          : check_proof(target.indexed_view(), *u, *root, certificate);

  Json out;
  out["query"] = Json{{"u", subset_to_json(*u)}, {"root", root->encode()}};
  if (result.ok()) {
    out["valid"] = true;
    emit(opts, "json", out, "valid\n");
    return 0;
  }
  out["valid"] = false;
  Json path = Json::array();
  for (std::size_t step : result.failure->path) path.push_back(step);
  out["path"] = std::move(path);
  out["reason"] = result.failure->reason;
  std::string text = "invalid at path [";
  for (std::size_t i = 0; i < result.failure->path.size(); ++i) {
    if (i) text += " ";
    text += std::to_string(result.failure->path[i]);
  }
  text += "]: " + result.failure->reason + "\n";
  emit(opts, "json", out, text);
  return 1;
}

int cmd_enumerate(const Options& opts) {
  Target target = load_target(opts);
  if (!target.is_program) throw UsageError("enumerate needs a program source");
  if (opts.input.empty()) throw UsageError("enumerate needs --input");
  Element root = parse_input(target, opts.input);

  OutcomeResult result = enumerate_outcomes(
      target.program->functional, target.program->axioms, root, opts.fuel);

  Json doc;
  doc["query"] = Json{{"root", root.encode()}};
  if (result.diverged()) {
    doc["result"] = "divergence";
    doc["reason"] = "fuelExhausted";
    emit(opts, "json", doc, "divergence (fuel exhausted)\n");
    return 1;
  }
  if (result.outcomes().empty()) {
    // No resolution of the choices terminates.
    doc["result"] = "divergence";
    doc["reason"] = "noTerminatingResolution";
    doc["outcomes"] = Json::array();
    emit(opts, "json", doc, "divergence (no terminating resolution)\n");
    return 1;
  }
  doc["result"] = "outcomes";
  Json outcomes = Json::array();
  for (const Value& v : result.outcomes()) outcomes.push_back(v.encode());
  doc["outcomes"] = std::move(outcomes);
  emit(opts, "json", doc,
       "outcomes: " + join_elements(result.outcomes()) + "\n");
  return 0;
}

int cmd_positivity(const Options& opts) {
  Target target = load_target(opts);
  if (opts.input.empty()) throw UsageError("positivity needs --input");
  Element root = parse_input(target, opts.input);
  Subset f = parse_subset(opts.subset_json, Subset::universal());

  PositivityResult result =
      target.has_singleton_view()
          ? positivity(target.singleton_view(), f, root, opts.budget)
          : positivity(target.indexed_view(), f, root, opts.budget);

  Json doc;
  doc["query"] = Json{{"f", subset_to_json(f)}, {"root", root.encode()}};
  switch (result.status()) {
    case PositivityResult::Status::Positive: {
      doc["result"] = "positive";
      doc["witness"] =
          positivity_witness_to_json(result.witness(), result.lasso());
      std::string text = "positive: coinduction set {" +
                         join_elements(result.witness().set) + "}";
      if (result.lasso()) {
        text += ", lasso stem [" + join_elements(result.lasso()->stem) +
                "] cycle [" + join_elements(result.lasso()->cycle) + "]";
      }
      emit(opts, "json", doc, text + "\n");
      return 0;
    }
    case PositivityResult::Status::NotPositive:
      doc["result"] = "notPositive";
      emit(opts, "json", doc, "not positive\n");
      return 0;
    case PositivityResult::Status::Unknown:
      doc["result"] = "unknown";
      doc["explored"] = result.explored();
      doc["budget"] = result.budget();
      emit(opts, "json", doc,
           "unknown: explored " + std::to_string(result.explored()) +
               " elements of budget " + std::to_string(result.budget()) +
               "\n");
      return 2;
  }
  return 3;
}

// ---------------------------------------------------------------------------

int dispatch(const std::string& command, const Options& opts) {
  try {
    if (command == "check") return cmd_check(opts);
    if (command == "run") return cmd_run(opts);
    if (command == "verify-cert") return cmd_verify_cert(opts);
    if (command == "enumerate") return cmd_enumerate(opts);
    if (command == "positivity") return cmd_positivity(opts);
    throw UsageError("unknown command");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

struct WorkerCall {
  const std::function<int()>* body;
  int result = 3;
  std::exception_ptr error;
};

extern "C" void* topocover_worker_entry(void* raw) {
  auto* call = static_cast<WorkerCall*>(raw);
  try {
    call->result = (*call->body)();
  } catch (...) {
    call->error = std::current_exception();
  }
  return nullptr;
}

// Deep certificates and deep evaluations consume machine stack in
// proportion to the derivation height; a dedicated worker thread with a
// large stack keeps the default budget usable.
int run_with_large_stack(const std::function<int()>& body) {
  WorkerCall call{&body, 3, nullptr};
  pthread_attr_t attr;
  if (pthread_attr_init(&attr) != 0) return body();
  pthread_attr_setstacksize(&attr, std::size_t{512} << 20);
  pthread_t thread;
  if (pthread_create(&thread, &attr, topocover_worker_entry, &call) != 0) {
    pthread_attr_destroy(&attr);
    return body();
  }
  pthread_join(thread, nullptr);
  pthread_attr_destroy(&attr);
  if (call.error) std::rethrow_exception(call.error);
  return call.result;
}

void add_common_options(CLI::App* cmd, Options& opts, bool with_budget,
                        bool with_fuel) {
  cmd->add_option("source", opts.source,
                  "program file, graph JSON file, or inline graph JSON")
      ->required();
  cmd->add_option("--fn", opts.fn,
                  "function to analyse (default: the only one defined)");
  cmd->add_option("--input", opts.input, "input element, e.g. (12)");
  if (with_budget) {
    cmd->add_option("--budget", opts.budget,
                    "max distinct elements to explore")
        ->envname("TOPOCOVER_BUDGET")
        ->check(CLI::PositiveNumber);
  }
  if (with_fuel) {
    cmd->add_option("--fuel", opts.fuel, "max evaluation steps")
        ->check(CLI::PositiveNumber);
  }
  cmd->add_option("--format", opts.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--out", opts.out_path, "write the result document here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "topocover: termination certificates and divergence witnesses for "
      "first-order recursive programs via inductive covers"};
  app.require_subcommand(1);
  Options opts;

  CLI::App* check =
      app.add_subcommand("check", "derive a cover certificate or a refutation");
  add_common_options(check, opts, true, false);
  check->add_option("--u", opts.subset_json,
                    "cover target subset as JSON (default: empty)");
  check->add_option("--range", opts.range,
                    "check every natural input in A..B");

  CLI::App* run = app.add_subcommand("run", "evaluate a program input");
  add_common_options(run, opts, true, true);
  run->add_option("--mode", opts.mode, "certified | extracted | relative")
      ->check(CLI::IsMember({"certified", "extracted", "relative"}));
  run->add_option("--oracle", opts.oracle,
                  "oracle table JSON (inline or a file path)");
  run->add_option("--cert", opts.cert_path,
                  "use this certificate instead of deriving one");

  CLI::App* verify = app.add_subcommand(
      "verify-cert", "check a certificate against an axiom set");
  add_common_options(verify, opts, false, false);
  verify->add_option("--cert", opts.cert_path,
                     "certificate or result document")
      ->required();
  verify->add_option("--u", opts.subset_json,
                     "cover target subset as JSON (default: from the "
                     "document, else empty)");

  CLI::App* enumerate =
      app.add_subcommand("enumerate", "enumerate all nondeterministic outcomes");
  add_common_options(enumerate, opts, false, true);

  CLI::App* positivity =
      app.add_subcommand("positivity", "decide divergence within a subset");
  add_common_options(positivity, opts, true, false);
  positivity->add_option("--u", opts.subset_json,
                         "the subset F as JSON (default: universal)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  std::string command;
  for (CLI::App* cmd : {check, run, verify, enumerate, positivity}) {
    if (cmd->parsed()) command = cmd->get_name();
  }
  return run_with_large_stack([&] { return dispatch(command, opts); });
}
