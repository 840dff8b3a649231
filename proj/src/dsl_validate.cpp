#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "topocover/dsl.hpp"

namespace topo::dsl {

const char* violation_kind_name(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::NestedRecursiveCall: return "NestedRecursiveCall";
    case Violation::Kind::RecursiveCallInCondition:
      return "RecursiveCallInCondition";
    case Violation::Kind::UnboundVariable: return "UnboundVariable";
    case Violation::Kind::UnknownFunction: return "UnknownFunction";
    case Violation::Kind::ArityMismatch: return "ArityMismatch";
    case Violation::Kind::PatternCountMismatch: return "PatternCountMismatch";
    case Violation::Kind::DuplicateFunction: return "DuplicateFunction";
    case Violation::Kind::DuplicatePatternVariable:
      return "DuplicatePatternVariable";
    case Violation::Kind::MutualRecursion: return "MutualRecursion";
    case Violation::Kind::ChoiceOutsideResult: return "ChoiceOutsideResult";
    case Violation::Kind::NonExhaustive: return "NonExhaustiveWarning";
    case Violation::Kind::Overlap: return "OverlapWarning";
  }
  return "Violation";
}

bool has_errors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return !v.warning; });
}

namespace {

class Checker {
 public:
  explicit Checker(const Program& program) : program_(program) {}

  std::vector<Violation> run() {
    collect_functions();
    for (const FunctionDef& f : program_.functions) check_function(f);
    check_call_graph();
    for (const FunctionDef& f : program_.functions) check_clause_coverage(f);
    return std::move(out_);
  }

 private:
  void error(Violation::Kind kind, const std::string& fn, SourcePos pos,
             std::string message) {
    out_.push_back({kind, false, fn, pos, std::move(message)});
  }

  void warn(Violation::Kind kind, const std::string& fn, SourcePos pos,
            std::string message) {
    out_.push_back({kind, true, fn, pos, std::move(message)});
  }

  void collect_functions() {
    for (const FunctionDef& f : program_.functions) {
      if (!defs_.emplace(f.name, &f).second) {
        error(Violation::Kind::DuplicateFunction, f.name, f.pos,
              "function '" + f.name + "' is defined more than once");
      }
    }
  }

  void check_function(const FunctionDef& f) {
    for (const Clause& c : f.clauses) {
      if (c.patterns.size() != f.arity()) {
        error(Violation::Kind::PatternCountMismatch, f.name, c.pos,
              "clause has " + std::to_string(c.patterns.size()) +
                  " patterns, function arity is " +
                  std::to_string(f.arity()));
        continue;
      }
      std::set<std::string> bound;
      for (const Pattern& p : c.patterns) {
        if (p.kind == Pattern::Kind::Lit) continue;
        if (!bound.insert(p.var).second) {
          error(Violation::Kind::DuplicatePatternVariable, f.name, p.pos,
                "pattern variable '" + p.var + "' bound twice in one clause");
        }
      }
      walk_body(f, *c.body, bound,
                /*result_position=*/true, /*in_recursive_args=*/false,
                /*in_condition=*/false);
    }
  }

  void walk_body(const FunctionDef& f, const Expr& e,
                 const std::set<std::string>& bound, bool result_position,
                 bool in_recursive_args, bool in_condition) {
    switch (e.kind) {
      case Expr::Kind::NatLit:
        return;
      case Expr::Kind::VarRef:
        if (!bound.count(e.name)) {
          error(Violation::Kind::UnboundVariable, f.name, e.pos,
                "variable '" + e.name + "' is not bound by the clause pattern");
        }
        return;
      case Expr::Kind::Arith:
        for (const ExprPtr& k : e.kids) {
          walk_body(f, *k, bound, false, in_recursive_args, in_condition);
        }
        return;
      case Expr::Kind::If:
        walk_body(f, *e.kids[0], bound, false, in_recursive_args, true);
        walk_body(f, *e.kids[1], bound, false, in_recursive_args, true);
        walk_body(f, *e.kids[2], bound, result_position, in_recursive_args,
                  in_condition);
        walk_body(f, *e.kids[3], bound, result_position, in_recursive_args,
                  in_condition);
        return;
      case Expr::Kind::Call: {
        bool recursive = e.name == f.name;
        calls_[f.name].insert(e.name);
        auto it = defs_.find(e.name);
        if (it == defs_.end()) {
          error(Violation::Kind::UnknownFunction, f.name, e.pos,
                "call to undefined function '" + e.name + "'");
        } else if (it->second->arity() != e.kids.size()) {
          error(Violation::Kind::ArityMismatch, f.name, e.pos,
                "'" + e.name + "' takes " +
                    std::to_string(it->second->arity()) + " arguments, " +
                    std::to_string(e.kids.size()) + " given");
        }
        if (recursive && in_condition) {
          error(Violation::Kind::RecursiveCallInCondition, f.name, e.pos,
                "recursive call inside a condition; the branch must be "
                "decidable before any recursive call");
        }
        if (recursive && in_recursive_args) {
          error(Violation::Kind::NestedRecursiveCall, f.name, e.pos,
                "recursive call nested inside the arguments of a recursive "
                "call");
        }
        for (const ExprPtr& arg : e.kids) {
          walk_body(f, *arg, bound, false,
                    in_recursive_args || recursive, in_condition);
        }
        return;
      }
      case Expr::Kind::Choice:
        if (!result_position) {
          error(Violation::Kind::ChoiceOutsideResult, f.name, e.pos,
                "choice is only allowed where a complete result is expected");
        }
        for (const ExprPtr& alt : e.kids) {
          walk_body(f, *alt, bound, true, in_recursive_args, in_condition);
        }
        return;
    }
  }

  void check_call_graph() {
    // Mutual recursion = a call cycle through at least two functions.
    // Self-recursion is the supported case and stays out of this check.
    std::map<std::string, std::set<std::string>> reach = calls_;
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto& [fn, targets] : reach) {
        std::set<std::string> next = targets;
        for (const std::string& t : targets) {
          auto it = reach.find(t);
          if (it == reach.end()) continue;
          next.insert(it->second.begin(), it->second.end());
        }
        if (next.size() != targets.size()) {
          targets = std::move(next);
          grew = true;
        }
      }
    }
    for (const FunctionDef& f : program_.functions) {
      auto it = reach.find(f.name);
      if (it == reach.end()) continue;
      for (const std::string& other : it->second) {
        if (other == f.name) continue;
        auto back = reach.find(other);
        if (back != reach.end() && back->second.count(f.name)) {
          error(Violation::Kind::MutualRecursion, f.name, f.pos,
                "'" + f.name + "' and '" + other +
                    "' are mutually recursive");
          break;
        }
      }
    }
  }

  // Patterns only distinguish naturals up to their largest literal, so
  // membership is uniform beyond it and checking 0..max+1 per argument
  // decides exhaustiveness and shadowing exactly.
  void check_clause_coverage(const FunctionDef& f) {
    if (f.clauses.empty()) return;
    for (const Clause& c : f.clauses) {
      if (c.patterns.size() != f.arity()) return;  // already an error
    }
    std::uint64_t max_lit = 0;
    for (const Clause& c : f.clauses) {
      for (const Pattern& p : c.patterns) {
        if (p.kind != Pattern::Kind::Var) max_lit = std::max(max_lit, p.lit);
      }
    }
    std::uint64_t domain = max_lit + 2;  // values 0 .. max_lit+1
    double combos = 1;
    for (std::size_t i = 0; i < f.arity(); ++i) {
      combos *= static_cast<double>(domain);
    }
    if (combos > 200000.0) return;  // coverage check not worth the walk

    auto matches = [](const Pattern& p, std::uint64_t n) {
      switch (p.kind) {
        case Pattern::Kind::Lit: return n == p.lit;
        case Pattern::Kind::Var: return true;
        case Pattern::Kind::VarPlus: return n >= p.lit;
      }
      return false;
    };

    std::vector<std::uint64_t> args(f.arity(), 0);
    std::vector<bool> useful(f.clauses.size(), false);
    std::optional<std::vector<std::uint64_t>> unmatched;
    while (true) {
      bool any = false;
      for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
        bool all = true;
        for (std::size_t ai = 0; ai < f.arity(); ++ai) {
          if (!matches(f.clauses[ci].patterns[ai], args[ai])) {
            all = false;
            break;
          }
        }
        if (all) {
          useful[ci] = true;
          any = true;
          break;  // first match
        }
      }
      if (!any && !unmatched) unmatched = args;

      std::size_t i = 0;
      for (; i < args.size(); ++i) {
        if (++args[i] < domain) break;
        args[i] = 0;
      }
      if (i == args.size()) break;
    }

    if (unmatched) {
      std::ostringstream os;
      os << "input ";
      if (unmatched->size() == 1) {
        os << (*unmatched)[0];
      } else {
        os << "(";
        for (std::size_t i = 0; i < unmatched->size(); ++i) {
          if (i) os << ",";
          os << (*unmatched)[i];
        }
        os << ")";
      }
      os << " is matched by no clause";
      warn(Violation::Kind::NonExhaustive, f.name, f.pos, os.str());
    }
    for (std::size_t ci = 0; ci < f.clauses.size(); ++ci) {
      if (!useful[ci]) {
        warn(Violation::Kind::Overlap, f.name, f.clauses[ci].pos,
             "clause " + std::to_string(ci + 1) +
                 " is shadowed by earlier clauses");
      }
    }
  }

  const Program& program_;
  std::map<std::string, const FunctionDef*> defs_;
  std::map<std::string, std::set<std::string>> calls_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate(const Program& program) {
  return Checker(program).run();
}

}  // namespace topo::dsl
