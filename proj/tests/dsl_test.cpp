#include <random>

#include "doctest.h"
#include "support.hpp"
#include "topocover/derive.hpp"
#include "topocover/dsl.hpp"
#include "topocover/error.hpp"

using namespace topo;
using namespace topo::dsl;
using testutil::nat;

namespace {

Program parse_ok(const std::string& src) {
  auto result = parse(src);
  if (!result.ok()) {
    FAIL("parse failed at ", result.error->pos.line, ":",
         result.error->pos.column, ": ", result.error->message);
  }
  return *result.program;
}

bool has_violation(const std::vector<Violation>& vs, Violation::Kind kind) {
  for (const Violation& v : vs) {
    if (v.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("parse: the three-clause fib program") {
  Program p = parse_ok(testutil::kFibSource);
  REQUIRE(p.functions.size() == 1);
  const FunctionDef& fib = p.functions[0];
  CHECK(fib.name == "fib");
  CHECK(fib.arity() == 1);
  REQUIRE(fib.clauses.size() == 3);
  CHECK(fib.clauses[0].patterns[0].kind == Pattern::Kind::Lit);
  CHECK(fib.clauses[2].patterns[0].kind == Pattern::Kind::VarPlus);
  CHECK(fib.clauses[2].patterns[0].lit == 2);
  CHECK(fib.clauses[2].body->kind == Expr::Kind::Arith);
}

TEST_CASE("parse: choice body") {
  Program p = parse_ok(testutil::kChoiceSource);
  const FunctionDef& f = p.functions[0];
  REQUIRE(f.clauses.size() == 3);
  CHECK(f.clauses[2].body->kind == Expr::Kind::Choice);
  CHECK(f.clauses[2].body->kids.size() == 2);
}

TEST_CASE("parse: nested call parses, validation rejects it") {
  Program p = parse_ok("fn g(n){ n -> g(g(n)); }");
  auto violations = validate(p);
  CHECK(has_errors(violations));
  CHECK(has_violation(violations, Violation::Kind::NestedRecursiveCall));
  // The violation carries the position of the inner call.
  for (const Violation& v : violations) {
    if (v.kind == Violation::Kind::NestedRecursiveCall) {
      CHECK(v.pos.line == 1);
      CHECK(v.pos.column > 10);
    }
  }
}

TEST_CASE("parse: positioned errors, no partial programs") {
  auto r1 = parse("fn f(n){ 0 -> ; }");
  REQUIRE_FALSE(r1.ok());
  CHECK(r1.error->pos.line == 1);
  CHECK(r1.error->pos.column == 15);

  auto r2 = parse("fn f(){ 0 -> 1; }");
  REQUIRE_FALSE(r2.ok());

  auto r3 = parse("");
  REQUIRE_FALSE(r3.ok());

  auto r4 = parse("fn f(n){ n -> n; } trailing");
  REQUIRE_FALSE(r4.ok());

  auto r5 = parse("fn f(n){ n -> 18446744073709551616; }");
  REQUIRE_FALSE(r5.ok());
  CHECK(r5.error->message == "natural literal out of range");
}

TEST_CASE("parse: comments and whitespace are insignificant") {
  Program a = parse_ok("fn f(n){ # comment\n n -> n; }");
  Program b = parse_ok("fn f(n){n->n;}");
  CHECK(structurally_equal(a, b));
}

TEST_CASE("pretty-printed programs re-parse structurally equal") {
  const char* sources[] = {
      testutil::kFibSource,
      testutil::kChoiceSource,
      "fn f(n){ n -> if n < 3 then 1 + n * 2 else f(n - 1); }",
      "fn f(n){ n -> (1 + n) * 2; }",
      "fn f(n){ n -> f(n - 1) | 0 | if n == 4 then 1 else 2; }",
      "fn f(n, m){ 0, m -> m; n + 1, m -> f(n, m + 1); }",
      "fn g(k){ k -> k div 2 + k mod 3 - 1; }",
      "fn h(n){ 2 + n -> n; n -> 0; }",  // literal-plus-var pattern form
  };
  for (const char* src : sources) {
    Program p = parse_ok(src);
    Program q = parse_ok(pretty(p));
    CHECK(structurally_equal(p, q));
  }
}

TEST_CASE("validate: clean programs and the violation catalogue") {
  CHECK(validate(parse_ok(testutil::kFibSource)).empty());
  CHECK(validate(parse_ok(testutil::kChoiceSource)).empty());

  auto nonexhaustive = validate(parse_ok("fn h(n){ 5 -> 0; }"));
  CHECK_FALSE(has_errors(nonexhaustive));
  CHECK(has_violation(nonexhaustive, Violation::Kind::NonExhaustive));

  auto overlap = validate(parse_ok("fn f(n){ n -> 1; 5 -> 2; }"));
  CHECK_FALSE(has_errors(overlap));
  CHECK(has_violation(overlap, Violation::Kind::Overlap));

  auto unbound = validate(parse_ok("fn f(n){ 0 -> m; }"));
  CHECK(has_violation(unbound, Violation::Kind::UnboundVariable));

  auto in_condition =
      validate(parse_ok("fn f(n){ n -> if f(n) == 0 then 1 else 2; }"));
  CHECK(has_violation(in_condition,
                      Violation::Kind::RecursiveCallInCondition));

  auto mutual = validate(
      parse_ok("fn f(n){ n -> g(n); } fn g(n){ n -> f(n); }"));
  CHECK(has_violation(mutual, Violation::Kind::MutualRecursion));

  auto unknown = validate(parse_ok("fn f(n){ n -> q(n); }"));
  CHECK(has_violation(unknown, Violation::Kind::UnknownFunction));

  auto arity = validate(parse_ok("fn f(n, m){ n, m -> f(n); }"));
  CHECK(has_violation(arity, Violation::Kind::ArityMismatch));

  auto dup_var = validate(parse_ok("fn f(n, m){ x, x -> x; }"));
  CHECK(has_violation(dup_var, Violation::Kind::DuplicatePatternVariable));

  auto pat_count = validate(parse_ok("fn f(n, m){ 0 -> 0; }"));
  CHECK(has_violation(pat_count, Violation::Kind::PatternCountMismatch));

  auto dup_fn = validate(parse_ok("fn f(n){ n -> n; } fn f(n){ n -> n; }"));
  CHECK(has_violation(dup_fn, Violation::Kind::DuplicateFunction));

  auto choice_pos =
      validate(parse_ok("fn f(n){ n -> 1 + (f(n) | 0); }"));
  CHECK(has_violation(choice_pos, Violation::Kind::ChoiceOutsideResult));
}

TEST_CASE("validate: exhaustiveness over several arguments") {
  auto ok = validate(parse_ok("fn f(n, m){ 0, m -> m; n + 1, m -> n; }"));
  CHECK_FALSE(has_violation(ok, Violation::Kind::NonExhaustive));
  auto missing =
      validate(parse_ok("fn f(n, m){ 0, m -> m; n + 2, m -> n; }"));
  CHECK(has_violation(missing, Violation::Kind::NonExhaustive));
}

TEST_CASE("lower: fib produces the expected call relation") {
  Program p = parse_ok(testutil::kFibSource);
  auto lowered = lower(p, "fib");
  CHECK(lowered.arity == 1);
  CHECK(lowered.axioms.indexes(nat(0)) == std::vector<std::size_t>{0});
  CHECK(lowered.axioms.children(nat(0), 0).empty());
  CHECK(lowered.axioms.children(nat(1), 0).empty());
  for (std::uint64_t n = 2; n <= 20; ++n) {
    CHECK(lowered.axioms.children(nat(n), 0) ==
          std::vector<Element>{nat(n - 2), nat(n - 1)});
  }
  CHECK(lowered.axioms.origin() == Provenance::FromProgram);

  auto single = lower_singleton(p, "fib");
  CHECK(single.axioms.children(nat(9)) ==
        std::vector<Element>{nat(7), nat(8)});
}

TEST_CASE("lower: the choice program produces the indexed table") {
  Program p = parse_ok(testutil::kChoiceSource);
  auto lowered = lower(p, "f");
  CHECK(lowered.axioms.indexes(nat(0)) == std::vector<std::size_t>{0});
  CHECK(lowered.axioms.indexes(nat(1)) == std::vector<std::size_t>{0});
  for (std::uint64_t n = 2; n <= 12; ++n) {
    CHECK(lowered.axioms.indexes(nat(n)) == std::vector<std::size_t>{0, 1});
    CHECK(lowered.axioms.children(nat(n), 0) ==
          std::vector<Element>{nat(n - 2)});
    CHECK(lowered.axioms.children(nat(n), 1) ==
          std::vector<Element>{nat(n - 1)});
  }
  CHECK_THROWS_AS(lower_singleton(p, "f"), Error);
  CHECK_FALSE(is_deterministic(p, "f"));
}

TEST_CASE("lower: identity has no children anywhere") {
  Program p = parse_ok("fn id(n){ n -> n; }");
  auto lowered = lower_singleton(p, "id");
  for (std::uint64_t n = 0; n < 10; ++n) {
    CHECK(lowered.axioms.children(nat(n)).empty());
  }
  Functional::Recurse nobody = [](const Element&) -> Value {
    throw Error(Errc::GuardViolation, "no recursion expected");
  };
  CHECK(lowered.functional.step(nat(7), nobody) == nat(7));
  CHECK(lowered.functional.step(Element::atom("z"), nobody) ==
        Element::atom("z"));
}

TEST_CASE("lower: evaluation matches the iterative oracle") {
  Program p = parse_ok(testutil::kFibSource);
  auto lowered = lower_singleton(p, "fib");
  for (std::uint64_t n = 0; n <= 20; ++n) {
    auto result = derive(lowered.axioms, Subset::empty(), nat(n), 100000);
    REQUIRE(result.is_covered());
    CHECK(eval_certified(lowered.functional, lowered.axioms, nat(n),
                         result.proof()) == nat(testutil::fib_oracle(n)));
    auto extracted =
        eval_extracted(lowered.functional, lowered.axioms, nat(n), 100000);
    REQUIRE_FALSE(extracted.diverged());
    CHECK(extracted.value() == nat(testutil::fib_oracle(n)));
  }
}

TEST_CASE("lower: repeated lowering is pointwise identical") {
  Program p = parse_ok(testutil::kChoiceSource);
  auto first = lower(p, "f");
  auto second = lower(p, "f");
  for (std::uint64_t n = 0; n <= 15; ++n) {
    CHECK(first.axioms.indexes(nat(n)) == second.axioms.indexes(nat(n)));
    for (std::size_t i : first.axioms.indexes(nat(n))) {
      CHECK(first.axioms.children(nat(n), i) ==
            second.axioms.children(nat(n), i));
    }
  }
}

TEST_CASE("lower: pattern semantics against brute-force matching") {
  Program p = parse_ok(
      "fn f(n){ 3 -> 100; n + 7 -> n; n -> 200; }");
  auto lowered = lower_singleton(p, "f");
  Functional::Recurse nobody = [](const Element&) -> Value {
    throw Error(Errc::GuardViolation, "no recursion expected");
  };
  for (std::uint64_t n = 0; n <= 1000; ++n) {
    // First match: literal 3, then n+7 binding n-7, then the catch-all.
    std::uint64_t expected = n == 3 ? 100 : n >= 7 ? n - 7 : 200;
    CHECK(lowered.functional.step(nat(n), nobody) == nat(expected));
  }
}

TEST_CASE("lower: unmatched inputs fail at query time") {
  Program p = parse_ok("fn h(n){ 5 -> 0; }");
  auto lowered = lower(p, "h");
  CHECK(lowered.axioms.children(nat(5), 0).empty());
  try {
    lowered.axioms.indexes(nat(3));
    FAIL("expected NoMatchingClause");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoMatchingClause);
  }
}

TEST_CASE("lower: choice count excludes dead branches") {
  Program p = parse_ok(
      "fn f(n){ n -> if n < 1 then 7 else (f(n - 1) | f(n - 2) | 0); }");
  auto lowered = lower(p, "f");
  CHECK(lowered.axioms.indexes(nat(0)) == std::vector<std::size_t>{0});
  CHECK(lowered.axioms.indexes(nat(5)) ==
        std::vector<std::size_t>{0, 1, 2});
  CHECK(lowered.axioms.children(nat(5), 0) == std::vector<Element>{nat(4)});
  CHECK(lowered.axioms.children(nat(5), 1) == std::vector<Element>{nat(3)});
  CHECK(lowered.axioms.children(nat(5), 2).empty());

  // Nested choices enumerate paths, not a full product.
  Program q = parse_ok("fn g(n){ n -> 0 | (1 | 2); }");
  auto nested = lower(q, "g");
  CHECK(nested.axioms.indexes(nat(0)) ==
        std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("lower: multi-argument functions use tuple inputs") {
  Program p = parse_ok(
      "fn add(n, m){ 0, m -> m; n + 1, m -> add(n, m + 1); }");
  auto lowered = lower_singleton(p, "add");
  CHECK(lowered.arity == 2);
  Element input = input_element({nat(2), nat(3)}, 2);
  CHECK(input == Element::tuple({nat(2), nat(3)}));
  CHECK(lowered.axioms.children(input) ==
        std::vector<Element>{Element::tuple({nat(1), nat(4)})});
  auto result = derive(lowered.axioms, Subset::empty(), input, 1000);
  REQUIRE(result.is_covered());
  CHECK(eval_certified(lowered.functional, lowered.axioms, input,
                       result.proof()) == nat(5));
}

TEST_CASE("lower: helpers are inlined, recursive helpers rejected") {
  Program p = parse_ok(
      "fn double(k){ k -> k * 2; }\n"
      "fn f(n){ 0 -> 0; n + 1 -> f(n) + double(n + 1); }");
  auto lowered = lower_singleton(p, "f");
  CHECK(lowered.axioms.children(nat(4)) == std::vector<Element>{nat(3)});
  auto result = derive(lowered.axioms, Subset::empty(), nat(4), 1000);
  REQUIRE(result.is_covered());
  // f(n) = 2 * (1 + 2 + ... + n)
  CHECK(eval_certified(lowered.functional, lowered.axioms, nat(4),
                       result.proof()) == nat(20));

  Program bad = parse_ok(
      "fn loop(k){ k -> loop(k); }\n"
      "fn f(n){ n -> loop(n); }");
  CHECK_THROWS_AS(lower(bad, "f"), Error);
  // Lowering the self-recursive function itself is fine.
  CHECK_NOTHROW(lower(bad, "loop"));
}

TEST_CASE("lower: division by zero is a reported evaluation error") {
  Program p = parse_ok("fn f(n){ n -> n div (n - n); }");
  auto lowered = lower_singleton(p, "f");
  Functional::Recurse nobody = [](const Element&) -> Value {
    throw Error(Errc::GuardViolation, "no recursion expected");
  };
  try {
    lowered.functional.step(nat(3), nobody);
    FAIL("expected DivisionByZero");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DivisionByZero);
  }
}

TEST_CASE("lower: arithmetic overflow is reported, never wrapped") {
  Program p = parse_ok("fn f(n){ n -> n * n; }");
  auto lowered = lower_singleton(p, "f");
  Functional::Recurse nobody = [](const Element&) -> Value {
    throw Error(Errc::GuardViolation, "no recursion expected");
  };
  try {
    lowered.functional.step(nat(std::uint64_t{1} << 63), nobody);
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Overflow);
  }
}
