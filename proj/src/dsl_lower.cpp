#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "topocover/dsl.hpp"
#include "topocover/error.hpp"

namespace topo::dsl {

Element input_element(std::vector<Element> args, std::size_t arity) {
  if (args.size() != arity) {
    throw Error(Errc::InvalidInput,
                "expected " + std::to_string(arity) + " arguments, got " +
                    std::to_string(args.size()));
  }
  if (arity == 1) return std::move(args[0]);
  return Element::tuple(std::move(args));
}

namespace {

using Env = std::map<std::string, Element>;
using RecurseHook = std::function<Value(const Element&)>;

struct LowerContext {
  Program program;
  std::string target;
  std::size_t arity = 1;
  std::map<std::string, const FunctionDef*> defs;  // into `program`
};

using CtxPtr = std::shared_ptr<const LowerContext>;

std::optional<Env> match_clause(const Clause& c,
                                const std::vector<Element>& args) {
  Env env;
  for (std::size_t i = 0; i < c.patterns.size(); ++i) {
    const Pattern& p = c.patterns[i];
    const Element& a = args[i];
    switch (p.kind) {
      case Pattern::Kind::Lit:
        if (!a.is_nat() || a.nat_value() != p.lit) return std::nullopt;
        break;
      case Pattern::Kind::Var:
        env[p.var] = a;
        break;
      case Pattern::Kind::VarPlus:
        if (!a.is_nat() || a.nat_value() < p.lit) return std::nullopt;
        env[p.var] = Element::nat(a.nat_value() - p.lit);
        break;
    }
  }
  return env;
}

struct Match {
  const Clause* clause;
  Env env;
};

std::optional<Match> match_args(const FunctionDef& f,
                                const std::vector<Element>& args) {
  for (const Clause& c : f.clauses) {
    if (auto env = match_clause(c, args)) return Match{&c, std::move(*env)};
  }
  return std::nullopt;
}

Match match_input(const FunctionDef& f, const Element& input) {
  std::vector<Element> args;
  if (f.arity() == 1) {
    args.push_back(input);
  } else if (input.is_tuple() && input.items().size() == f.arity()) {
    args = input.items();
  } else {
    throw Error(Errc::NoMatchingClause,
                "'" + f.name + "' takes " + std::to_string(f.arity()) +
                    " arguments; input " + input.encode() +
                    " has the wrong shape");
  }
  if (auto m = match_args(f, args)) return std::move(*m);
  throw Error(Errc::NoMatchingClause, "no clause of '" + f.name +
                                          "' matches input " + input.encode());
}

Value eval_expr(const CtxPtr& ctx, const Expr& e, const Env& env,
                const RecurseHook* recurse);

bool eval_condition(const CtxPtr& ctx, const Expr& ifnode, const Env& env) {
  // Conditions are recursion-free by construction (validated), so the
  // branch is decidable before any recursive call.
  Value l = eval_expr(ctx, *ifnode.kids[0], env, nullptr);
  Value r = eval_expr(ctx, *ifnode.kids[1], env, nullptr);
  if (!l.is_nat() || !r.is_nat()) {
    throw Error(Errc::TypeError, "comparison on non-numeric values " +
                                     l.encode() + " and " + r.encode());
  }
  switch (ifnode.cmp_op) {
    case CmpOp::Eq: return l.nat_value() == r.nat_value();
    case CmpOp::Lt: return l.nat_value() < r.nat_value();
    case CmpOp::Le: return l.nat_value() <= r.nat_value();
  }
  return false;
}

Value eval_expr(const CtxPtr& ctx, const Expr& e, const Env& env,
                const RecurseHook* recurse) {
  switch (e.kind) {
    case Expr::Kind::NatLit:
      return Element::nat(e.lit);
    case Expr::Kind::VarRef: {
      auto it = env.find(e.name);
      if (it == env.end()) {
        throw Error(Errc::InvalidInput, "unbound variable '" + e.name + "'");
      }
      return it->second;
    }
    case Expr::Kind::Arith: {
      Value l = eval_expr(ctx, *e.kids[0], env, recurse);
      Value r = eval_expr(ctx, *e.kids[1], env, recurse);
      if (!l.is_nat() || !r.is_nat()) {
        throw Error(Errc::TypeError, "arithmetic on non-numeric values " +
                                         l.encode() + " and " + r.encode());
      }
      std::uint64_t a = l.nat_value();
      std::uint64_t b = r.nat_value();
      switch (e.arith_op) {
        case ArithOp::Add:
          if (auto sum = checked_add(a, b)) return Element::nat(*sum);
          throw Error(Errc::Overflow, "addition overflow");
        case ArithOp::Monus:
          return Element::nat(monus(a, b));
        case ArithOp::Mul:
          if (auto prod = checked_mul(a, b)) return Element::nat(*prod);
          throw Error(Errc::Overflow, "multiplication overflow");
        case ArithOp::Div:
          if (b == 0) throw Error(Errc::DivisionByZero, "division by zero");
          return Element::nat(a / b);
        case ArithOp::Mod:
          if (b == 0) throw Error(Errc::DivisionByZero, "modulo by zero");
          return Element::nat(a % b);
      }
      return Element::nat(0);
    }
    case Expr::Kind::If:
      return eval_expr(ctx, eval_condition(ctx, e, env) ? *e.kids[2]
                                                        : *e.kids[3],
                       env, recurse);
    case Expr::Kind::Call: {
      if (e.name == ctx->target) {
        if (!recurse) {
          throw Error(Errc::InvalidInput,
                      "recursive call in a recursion-free context");
        }
        // Recursive-call arguments are recursion-free (validated).
        std::vector<Element> args;
        args.reserve(e.kids.size());
        for (const ExprPtr& arg : e.kids) {
          args.push_back(eval_expr(ctx, *arg, env, nullptr));
        }
        return (*recurse)(input_element(std::move(args), ctx->arity));
      }
      // Helper call: arguments may contain recursive calls, the helper
      // body itself is recursion-free (enforced at lowering).
      std::vector<Element> args;
      args.reserve(e.kids.size());
      for (const ExprPtr& arg : e.kids) {
        args.push_back(eval_expr(ctx, *arg, env, recurse));
      }
      const FunctionDef* g = ctx->defs.at(e.name);
      auto m = match_args(*g, args);
      if (!m) {
        throw Error(Errc::NoMatchingClause,
                    "no clause of '" + g->name + "' matches its arguments");
      }
      return eval_expr(ctx, *m->clause->body, m->env, nullptr);
    }
    case Expr::Kind::Choice:
      throw Error(Errc::InvalidInput,
                  "unresolved choice during evaluation");
  }
  return Element::nat(0);
}

// Choices are confined to result positions, so along one resolution the
// picks form a chain down the body: resolve conditions, consume one
// pick per choice, stop at the first node that is neither.
const Expr* resolve_spine(const CtxPtr& ctx, const Expr* e, const Env& env,
                          const std::vector<std::size_t>& picks) {
  std::size_t cursor = 0;
  while (true) {
    if (e->kind == Expr::Kind::Choice) {
      if (cursor >= picks.size() || picks[cursor] >= e->kids.size()) {
        throw Error(Errc::IndexOutOfRange, "resolution does not fit the body");
      }
      e = e->kids[picks[cursor++]].get();
      continue;
    }
    if (e->kind == Expr::Kind::If) {
      e = eval_condition(ctx, *e, env) ? e->kids[2].get() : e->kids[3].get();
      continue;
    }
    if (cursor != picks.size()) {
      throw Error(Errc::IndexOutOfRange, "resolution longer than the body");
    }
    return e;
  }
}

void enumerate_resolutions(const CtxPtr& ctx, const Expr* e, const Env& env,
                           std::vector<std::size_t>& prefix,
                           std::vector<std::vector<std::size_t>>& out) {
  while (true) {
    if (e->kind == Expr::Kind::If) {
      e = eval_condition(ctx, *e, env) ? e->kids[2].get() : e->kids[3].get();
      continue;
    }
    if (e->kind == Expr::Kind::Choice) {
      for (std::size_t j = 0; j < e->kids.size(); ++j) {
        prefix.push_back(j);
        enumerate_resolutions(ctx, e->kids[j].get(), env, prefix, out);
        prefix.pop_back();
      }
      return;
    }
    out.push_back(prefix);
    return;
  }
}

// Gathers the evaluated arguments of every recursive call along a
// resolved body (untaken branches of conditions excluded).
void collect_calls(const CtxPtr& ctx, const Expr& e, const Env& env,
                   std::vector<Element>& out) {
  switch (e.kind) {
    case Expr::Kind::NatLit:
    case Expr::Kind::VarRef:
      return;
    case Expr::Kind::Arith:
      for (const ExprPtr& k : e.kids) collect_calls(ctx, *k, env, out);
      return;
    case Expr::Kind::If:
      collect_calls(ctx,
                    eval_condition(ctx, e, env) ? *e.kids[2] : *e.kids[3], env,
                    out);
      return;
    case Expr::Kind::Call:
      if (e.name == ctx->target) {
        std::vector<Element> args;
        args.reserve(e.kids.size());
        for (const ExprPtr& arg : e.kids) {
          args.push_back(eval_expr(ctx, *arg, env, nullptr));
        }
        out.push_back(input_element(std::move(args), ctx->arity));
        return;
      }
      // Helper bodies are recursion-free; only the argument
      // expressions can harbour recursive calls.
      for (const ExprPtr& arg : e.kids) collect_calls(ctx, *arg, env, out);
      return;
    case Expr::Kind::Choice:
      throw Error(Errc::InvalidInput, "unresolved choice in resolved body");
  }
}

std::vector<std::vector<std::size_t>> resolutions_for(
    const CtxPtr& ctx, const Match& m) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> prefix;
  enumerate_resolutions(ctx, m.clause->body.get(), m.env, prefix, out);
  return out;
}

std::vector<Element> children_for(const CtxPtr& ctx, const Element& a,
                                  std::size_t index) {
  const FunctionDef& f = *ctx->defs.at(ctx->target);
  Match m = match_input(f, a);
  auto resolutions = resolutions_for(ctx, m);
  if (index >= resolutions.size()) {
    throw Error(Errc::IndexOutOfRange,
                "index " + std::to_string(index) + " out of range for " +
                    a.encode());
  }
  const Expr* leaf = resolve_spine(ctx, m.clause->body.get(), m.env,
                                   resolutions[index]);
  std::vector<Element> calls;
  collect_calls(ctx, *leaf, m.env, calls);
  std::sort(calls.begin(), calls.end());
  calls.erase(std::unique(calls.begin(), calls.end()), calls.end());
  return calls;
}

Value step_for(const CtxPtr& ctx, const Element& a, std::size_t index,
               const RecurseHook& recurse) {
  const FunctionDef& f = *ctx->defs.at(ctx->target);
  Match m = match_input(f, a);
  auto resolutions = resolutions_for(ctx, m);
  if (index >= resolutions.size()) {
    throw Error(Errc::IndexOutOfRange,
                "index " + std::to_string(index) + " out of range for " +
                    a.encode());
  }
  const Expr* leaf = resolve_spine(ctx, m.clause->body.get(), m.env,
                                   resolutions[index]);
  return eval_expr(ctx, *leaf, m.env, &recurse);
}

bool contains_choice(const Expr& e) {
  if (e.kind == Expr::Kind::Choice) return true;
  return std::any_of(e.kids.begin(), e.kids.end(),
                     [](const ExprPtr& k) { return contains_choice(*k); });
}

bool function_has_choice(const FunctionDef& f) {
  return std::any_of(f.clauses.begin(), f.clauses.end(), [](const Clause& c) {
    return contains_choice(*c.body);
  });
}

std::set<std::string> reachable_callees(const Program& p,
                                        const std::string& root) {
  std::map<std::string, std::set<std::string>> calls;
  for (const FunctionDef& f : p.functions) {
    std::vector<const Expr*> work;
    for (const Clause& c : f.clauses) work.push_back(c.body.get());
    while (!work.empty()) {
      const Expr* e = work.back();
      work.pop_back();
      if (e->kind == Expr::Kind::Call) calls[f.name].insert(e->name);
      for (const ExprPtr& k : e->kids) work.push_back(k.get());
    }
  }
  std::set<std::string> seen;
  std::vector<std::string> frontier{root};
  while (!frontier.empty()) {
    std::string fn = std::move(frontier.back());
    frontier.pop_back();
    for (const std::string& callee : calls[fn]) {
      if (seen.insert(callee).second) frontier.push_back(callee);
    }
  }
  return seen;
}

std::string format_violation(const Violation& v) {
  std::ostringstream os;
  os << v.function_name << ":" << v.pos.line << ":" << v.pos.column << ": "
     << violation_kind_name(v.kind) << ": " << v.message;
  return os.str();
}

CtxPtr make_context(const Program& program, const std::string& fname) {
  const FunctionDef* f = program.find(fname);
  if (!f) {
    throw Error(Errc::InvalidInput, "no function named '" + fname + "'");
  }
  auto violations = validate(program);
  if (has_errors(violations)) {
    for (const Violation& v : violations) {
      if (!v.warning) {
        throw Error(Errc::InvalidInput,
                    "program does not validate: " + format_violation(v));
      }
    }
  }
  for (const std::string& callee : reachable_callees(program, fname)) {
    if (callee == fname) continue;  // self-recursion is the point
    const FunctionDef* g = program.find(callee);
    if (!g) continue;  // validated above
    if (reachable_callees(program, callee).count(callee)) {
      throw Error(Errc::InvalidInput,
                  "helper '" + callee +
                      "' is recursive; only the lowered function may recurse");
    }
    if (function_has_choice(*g)) {
      throw Error(Errc::InvalidInput,
                  "helper '" + callee +
                      "' is nondeterministic; choices are only supported in "
                      "the lowered function");
    }
  }

  auto ctx = std::make_shared<LowerContext>();
  ctx->program = program;
  ctx->target = fname;
  ctx->arity = f->arity();
  for (const FunctionDef& def : ctx->program.functions) {
    ctx->defs.emplace(def.name, &def);
  }
  return ctx;
}

}  // namespace

Lowered lower(const Program& program, const std::string& fname) {
  CtxPtr ctx = make_context(program, fname);
  IndexedAxiomSet axioms(
      [ctx](const Element& a) {
        const FunctionDef& f = *ctx->defs.at(ctx->target);
        Match m = match_input(f, a);
        std::vector<std::size_t> indexes(resolutions_for(ctx, m).size());
        for (std::size_t i = 0; i < indexes.size(); ++i) indexes[i] = i;
        return indexes;
      },
      [ctx](const Element& a, std::size_t i) { return children_for(ctx, a, i); },
      Provenance::FromProgram);
  NondetFunctional functional(
      [ctx](const Element& a, std::size_t i,
            const NondetFunctional::Recurse& recurse) {
        return step_for(ctx, a, i, recurse);
      });
  return Lowered{std::move(axioms), std::move(functional), ctx->arity};
}

LoweredSingleton lower_singleton(const Program& program,
                                 const std::string& fname) {
  if (!is_deterministic(program, fname)) {
    throw Error(Errc::InvalidInput,
                "'" + fname +
                    "' is nondeterministic; lower it to an indexed axiom set");
  }
  CtxPtr ctx = make_context(program, fname);
  SingletonAxiomSet axioms(
      [ctx](const Element& a) { return children_for(ctx, a, 0); },
      Provenance::FromProgram);
  Functional functional(
      [ctx](const Element& a, const Functional::Recurse& recurse) {
        return step_for(ctx, a, 0, recurse);
      });
  return LoweredSingleton{std::move(axioms), std::move(functional),
                          ctx->arity};
}

bool is_deterministic(const Program& program, const std::string& fname) {
  const FunctionDef* f = program.find(fname);
  if (!f) {
    throw Error(Errc::InvalidInput, "no function named '" + fname + "'");
  }
  if (function_has_choice(*f)) return false;
  for (const std::string& callee : reachable_callees(program, fname)) {
    const FunctionDef* g = program.find(callee);
    if (g && function_has_choice(*g)) return false;
  }
  return true;
}

}  // namespace topo::dsl
