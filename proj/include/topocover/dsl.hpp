#ifndef TOPOCOVER_DSL_HPP
#define TOPOCOVER_DSL_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topocover/axioms.hpp"
#include "topocover/element.hpp"
#include "topocover/eval.hpp"

namespace topo::dsl {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// One argument pattern: a natural literal, a variable, or var+k
/// (matching naturals >= k and binding the variable to n-k).
struct Pattern {
  enum class Kind { Lit, Var, VarPlus };
  Kind kind = Kind::Var;
  std::uint64_t lit = 0;  // Lit value / VarPlus offset
  std::string var;        // Var / VarPlus
  SourcePos pos;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ArithOp { Add, Monus, Mul, Div, Mod };
enum class CmpOp { Eq, Lt, Le };

struct Expr {
  enum class Kind { NatLit, VarRef, Arith, If, Call, Choice };
  Kind kind = Kind::NatLit;
  SourcePos pos;
  std::uint64_t lit = 0;   // NatLit
  std::string name;        // VarRef / Call
  ArithOp arith_op = ArithOp::Add;
  CmpOp cmp_op = CmpOp::Eq;
  // Arith: [lhs, rhs]; If: [cmp-lhs, cmp-rhs, then, else];
  // Call: arguments; Choice: two or more alternatives.
  std::vector<ExprPtr> kids;
};

struct Clause {
  std::vector<Pattern> patterns;  // one per argument
  ExprPtr body;
  SourcePos pos;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<Clause> clauses;
  SourcePos pos;

  std::size_t arity() const { return params.size(); }
};

struct Program {
  std::vector<FunctionDef> functions;

  const FunctionDef* find(std::string_view name) const;
};

struct ParseError {
  SourcePos pos;
  std::string message;
};

struct ParseResult {
  std::optional<Program> program;
  std::optional<ParseError> error;

  bool ok() const { return program.has_value(); }
};

/// Parses a whole program; no partial programs are returned. The
/// pretty-printed form of a parsed program re-parses to a structurally
/// equal one.
ParseResult parse(std::string_view source);

std::string pretty(const Program& program);

bool structurally_equal(const Program& a, const Program& b);

struct Violation {
  enum class Kind {
    // errors
    NestedRecursiveCall,
    RecursiveCallInCondition,
    UnboundVariable,
    UnknownFunction,
    ArityMismatch,
    PatternCountMismatch,
    DuplicateFunction,
    DuplicatePatternVariable,
    MutualRecursion,
    ChoiceOutsideResult,
    // warnings
    NonExhaustive,
    Overlap,
  };

  Kind kind;
  bool warning = false;
  std::string function_name;
  SourcePos pos;
  std::string message;
};

const char* violation_kind_name(Violation::Kind kind);

/// Static checks: simple-recursion restrictions (no nested recursive
/// calls, none in conditions), scoping, call-graph sanity (mutual
/// recursion rejected), and the clause-coverage warnings.
std::vector<Violation> validate(const Program& program);

bool has_errors(const std::vector<Violation>& violations);

struct Lowered {
  IndexedAxiomSet axioms;
  NondetFunctional functional;
  std::size_t arity;
};

/// Lowers fname into its call-relation axiom set and one-step
/// functional. Choice nodes induce indexes enumerating resolution
/// vectors; children(a, i) are the recursive-call arguments along
/// resolution i. Inputs matched by no clause raise
/// Error(NoMatchingClause) when queried. Requires a program that
/// validates without errors.
Lowered lower(const Program& program, const std::string& fname);

struct LoweredSingleton {
  SingletonAxiomSet axioms;
  Functional functional;
  std::size_t arity;
};

/// Deterministic (choice-free) targets lower losslessly to a singleton
/// axiom set; throws Error(InvalidInput) when choices are reachable.
LoweredSingleton lower_singleton(const Program& program,
                                 const std::string& fname);

/// True when no Choice occurs in fname's clauses or in any helper
/// reachable from them.
bool is_deterministic(const Program& program, const std::string& fname);

/// Packs an argument list as the function input: the bare argument for
/// arity 1, a tuple otherwise. args.size() must equal arity.
Element input_element(std::vector<Element> args, std::size_t arity);

}  // namespace topo::dsl

#endif
