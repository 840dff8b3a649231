#include <cctype>
#include <charconv>
#include <sstream>

#include "topocover/dsl.hpp"
#include "topocover/error.hpp"

namespace topo::dsl {

const FunctionDef* Program::find(std::string_view name) const {
  for (const FunctionDef& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

namespace {

enum class Tok {
  Ident, Nat,
  KwFn, KwIf, KwThen, KwElse, KwDiv, KwMod,
  LParen, RParen, LBrace, RBrace,
  Comma, Semi, Arrow, Plus, Minus, Star, Pipe,
  EqEq, Lt, Le,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::uint64_t value = 0;
  SourcePos pos;
};

struct LexFail {
  SourcePos pos;
  std::string message;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  // Tokenizes the whole input; returns nullopt and fills `fail` on a
  // bad character or an out-of-range literal.
  std::optional<std::vector<Token>> run(LexFail& fail) {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      SourcePos pos{line_, col_};
      if (at_end()) {
        out.push_back({Tok::End, "", 0, pos});
        return out;
      }
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string digits;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
          digits.push_back(advance());
        }
        std::uint64_t value = 0;
        auto res = std::from_chars(digits.data(), digits.data() + digits.size(),
                                   value);
        if (res.ec != std::errc()) {
          fail = {pos, "natural literal out of range"};
          return std::nullopt;
        }
        out.push_back({Tok::Nat, std::move(digits), value, pos});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (!at_end()) {
          char d = peek();
          if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
            word.push_back(advance());
          } else {
            break;
          }
        }
        Tok kind = Tok::Ident;
        if (word == "fn") kind = Tok::KwFn;
        else if (word == "if") kind = Tok::KwIf;
        else if (word == "then") kind = Tok::KwThen;
        else if (word == "else") kind = Tok::KwElse;
        else if (word == "div") kind = Tok::KwDiv;
        else if (word == "mod") kind = Tok::KwMod;
        out.push_back({kind, std::move(word), 0, pos});
        continue;
      }
      advance();
      switch (c) {
        case '(': out.push_back({Tok::LParen, "(", 0, pos}); break;
        case ')': out.push_back({Tok::RParen, ")", 0, pos}); break;
        case '{': out.push_back({Tok::LBrace, "{", 0, pos}); break;
        case '}': out.push_back({Tok::RBrace, "}", 0, pos}); break;
        case ',': out.push_back({Tok::Comma, ",", 0, pos}); break;
        case ';': out.push_back({Tok::Semi, ";", 0, pos}); break;
        case '+': out.push_back({Tok::Plus, "+", 0, pos}); break;
        case '*': out.push_back({Tok::Star, "*", 0, pos}); break;
        case '|': out.push_back({Tok::Pipe, "|", 0, pos}); break;
        case '-':
          if (!at_end() && peek() == '>') {
            advance();
            out.push_back({Tok::Arrow, "->", 0, pos});
          } else {
            out.push_back({Tok::Minus, "-", 0, pos});
          }
          break;
        case '=':
          if (!at_end() && peek() == '=') {
            advance();
            out.push_back({Tok::EqEq, "==", 0, pos});
          } else {
            fail = {pos, "expected '==' (single '=' is not an operator)"};
            return std::nullopt;
          }
          break;
        case '<':
          if (!at_end() && peek() == '=') {
            advance();
            out.push_back({Tok::Le, "<=", 0, pos});
          } else {
            out.push_back({Tok::Lt, "<", 0, pos});
          }
          break;
        default:
          fail = {pos, std::string("unexpected character '") + c + "'"};
          return std::nullopt;
      }
    }
  }

 private:
  bool at_end() const { return offset_ >= src_.size(); }
  char peek() const { return src_[offset_]; }

  char advance() {
    char c = src_[offset_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    while (!at_end()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t offset_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// Thrown internally and converted to the ParseResult error.
struct SyntaxError {
  SourcePos pos;
  std::string message;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Program program() {
    Program p;
    while (!check(Tok::End)) p.functions.push_back(fndef());
    if (p.functions.empty()) {
      throw SyntaxError{peek().pos, "expected at least one function"};
    }
    return p;
  }

 private:
  FunctionDef fndef() {
    FunctionDef f;
    f.pos = peek().pos;
    expect(Tok::KwFn, "expected 'fn'");
    f.name = expect(Tok::Ident, "expected function name").text;
    expect(Tok::LParen, "expected '('");
    f.params.push_back(expect(Tok::Ident, "expected parameter name").text);
    while (match(Tok::Comma)) {
      f.params.push_back(expect(Tok::Ident, "expected parameter name").text);
    }
    expect(Tok::RParen, "expected ')'");
    expect(Tok::LBrace, "expected '{'");
    do {
      f.clauses.push_back(clause());
    } while (!check(Tok::RBrace));
    expect(Tok::RBrace, "expected '}'");
    return f;
  }

  Clause clause() {
    Clause c;
    c.pos = peek().pos;
    c.patterns.push_back(pattern());
    while (match(Tok::Comma)) c.patterns.push_back(pattern());
    expect(Tok::Arrow, "expected '->'");
    c.body = expr();
    expect(Tok::Semi, "expected ';'");
    return c;
  }

  Pattern pattern() {
    Pattern p;
    p.pos = peek().pos;
    if (check(Tok::Nat)) {
      std::uint64_t k = advance().value;
      if (match(Tok::Plus)) {
        p.kind = Pattern::Kind::VarPlus;
        p.lit = k;
        p.var = expect(Tok::Ident, "expected variable after '+'").text;
      } else {
        p.kind = Pattern::Kind::Lit;
        p.lit = k;
      }
      return p;
    }
    if (check(Tok::Ident)) {
      p.var = advance().text;
      if (match(Tok::Plus)) {
        p.kind = Pattern::Kind::VarPlus;
        p.lit = expect(Tok::Nat, "expected literal after '+'").value;
      } else {
        p.kind = Pattern::Kind::Var;
      }
      return p;
    }
    throw SyntaxError{peek().pos, "expected a pattern"};
  }

  ExprPtr expr() { return choice(); }

  ExprPtr choice() {
    ExprPtr first = ifexpr();
    if (!check(Tok::Pipe)) return first;
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::Choice;
    node->pos = first->pos;
    node->kids.push_back(std::move(first));
    while (match(Tok::Pipe)) node->kids.push_back(ifexpr());
    return node;
  }

  ExprPtr ifexpr() {
    if (!check(Tok::KwIf)) return arith();
    auto node = std::make_shared<Expr>();
    node->pos = advance().pos;  // 'if'
    node->kind = Expr::Kind::If;
    node->kids.push_back(arith());
    if (check(Tok::EqEq)) node->cmp_op = CmpOp::Eq;
    else if (check(Tok::Lt)) node->cmp_op = CmpOp::Lt;
    else if (check(Tok::Le)) node->cmp_op = CmpOp::Le;
    else throw SyntaxError{peek().pos, "expected '==', '<' or '<='"};
    advance();
    node->kids.push_back(arith());
    expect(Tok::KwThen, "expected 'then'");
    node->kids.push_back(expr());
    expect(Tok::KwElse, "expected 'else'");
    node->kids.push_back(expr());
    return node;
  }

  ExprPtr arith() {
    ExprPtr lhs = term();
    while (check(Tok::Plus) || check(Tok::Minus)) {
      Token op = advance();
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Arith;
      node->pos = op.pos;
      node->arith_op = op.kind == Tok::Plus ? ArithOp::Add : ArithOp::Monus;
      node->kids.push_back(std::move(lhs));
      node->kids.push_back(term());
      lhs = std::move(node);
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (check(Tok::Star) || check(Tok::KwDiv) || check(Tok::KwMod)) {
      Token op = advance();
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Arith;
      node->pos = op.pos;
      node->arith_op = op.kind == Tok::Star  ? ArithOp::Mul
                       : op.kind == Tok::KwDiv ? ArithOp::Div
                                               : ArithOp::Mod;
      node->kids.push_back(std::move(lhs));
      node->kids.push_back(factor());
      lhs = std::move(node);
    }
    return lhs;
  }

  ExprPtr factor() {
    if (check(Tok::Nat)) {
      Token t = advance();
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::NatLit;
      node->pos = t.pos;
      node->lit = t.value;
      return node;
    }
    if (check(Tok::Ident)) {
      Token t = advance();
      auto node = std::make_shared<Expr>();
      node->pos = t.pos;
      node->name = t.text;
      if (match(Tok::LParen)) {
        node->kind = Expr::Kind::Call;
        node->kids.push_back(expr());
        while (match(Tok::Comma)) node->kids.push_back(expr());
        expect(Tok::RParen, "expected ')'");
      } else {
        node->kind = Expr::Kind::VarRef;
      }
      return node;
    }
    if (match(Tok::LParen)) {
      ExprPtr inner = expr();
      expect(Tok::RParen, "expected ')'");
      return inner;
    }
    throw SyntaxError{peek().pos, "expected an expression"};
  }

  const Token& peek() const { return tokens_[cursor_]; }

  bool check(Tok kind) const { return peek().kind == kind; }

  Token advance() {
    Token t = tokens_[cursor_];
    if (t.kind != Tok::End) ++cursor_;
    return t;
  }

  bool match(Tok kind) {
    if (!check(kind)) return false;
    advance();
    return true;
  }

  Token expect(Tok kind, const char* message) {
    if (!check(kind)) {
      std::string found = peek().kind == Tok::End
                              ? "end of input"
                              : "'" + peek().text + "'";
      throw SyntaxError{peek().pos, std::string(message) + ", found " + found};
    }
    return advance();
  }

  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
};

}  // namespace

ParseResult parse(std::string_view source) {
  LexFail lex_fail;
  auto tokens = Lexer(source).run(lex_fail);
  if (!tokens) {
    return {std::nullopt, ParseError{lex_fail.pos, lex_fail.message}};
  }
  try {
    Parser parser(std::move(*tokens));
    return {parser.program(), std::nullopt};
  } catch (const SyntaxError& e) {
    return {std::nullopt, ParseError{e.pos, e.message}};
  }
}

namespace {

// Precedence levels for printing: higher binds tighter.
enum : int { kPrecChoice = 0, kPrecIf = 1, kPrecAdd = 2, kPrecMul = 3, kPrecAtom = 4 };

int precedence_of(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Choice: return kPrecChoice;
    case Expr::Kind::If: return kPrecIf;
    case Expr::Kind::Arith:
      return (e.arith_op == ArithOp::Add || e.arith_op == ArithOp::Monus)
                 ? kPrecAdd
                 : kPrecMul;
    default: return kPrecAtom;
  }
}

const char* arith_op_text(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Monus: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "div";
    case ArithOp::Mod: return "mod";
  }
  return "?";
}

const char* cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
  }
  return "?";
}

void print_expr(const Expr& e, int min_prec, std::ostream& os) {
  bool parens = precedence_of(e) < min_prec;
  if (parens) os << "(";
  switch (e.kind) {
    case Expr::Kind::NatLit:
      os << e.lit;
      break;
    case Expr::Kind::VarRef:
      os << e.name;
      break;
    case Expr::Kind::Arith: {
      int prec = precedence_of(e);
      print_expr(*e.kids[0], prec, os);
      os << " " << arith_op_text(e.arith_op) << " ";
      print_expr(*e.kids[1], prec + 1, os);
      break;
    }
    case Expr::Kind::If:
      os << "if ";
      print_expr(*e.kids[0], kPrecAdd, os);
      os << " " << cmp_op_text(e.cmp_op) << " ";
      print_expr(*e.kids[1], kPrecAdd, os);
      os << " then ";
      print_expr(*e.kids[2], kPrecIf, os);
      os << " else ";
      print_expr(*e.kids[3], kPrecIf, os);
      break;
    case Expr::Kind::Call: {
      os << e.name << "(";
      bool first = true;
      for (const ExprPtr& arg : e.kids) {
        if (!first) os << ", ";
        first = false;
        print_expr(*arg, kPrecChoice, os);
      }
      os << ")";
      break;
    }
    case Expr::Kind::Choice: {
      bool first = true;
      for (const ExprPtr& alt : e.kids) {
        if (!first) os << " | ";
        first = false;
        print_expr(*alt, kPrecIf, os);
      }
      break;
    }
  }
  if (parens) os << ")";
}

void print_pattern(const Pattern& p, std::ostream& os) {
  switch (p.kind) {
    case Pattern::Kind::Lit:
      os << p.lit;
      break;
    case Pattern::Kind::Var:
      os << p.var;
      break;
    case Pattern::Kind::VarPlus:
      os << p.var << " + " << p.lit;
      break;
  }
}

}  // namespace

std::string pretty(const Program& program) {
  std::ostringstream os;
  bool first_fn = true;
  for (const FunctionDef& f : program.functions) {
    if (!first_fn) os << "\n";
    first_fn = false;
    os << "fn " << f.name << "(";
    bool first = true;
    for (const std::string& p : f.params) {
      if (!first) os << ", ";
      first = false;
      os << p;
    }
    os << ") {\n";
    for (const Clause& c : f.clauses) {
      os << "  ";
      bool first_pat = true;
      for (const Pattern& p : c.patterns) {
        if (!first_pat) os << ", ";
        first_pat = false;
        print_pattern(p, os);
      }
      os << " -> ";
      print_expr(*c.body, kPrecChoice, os);
      os << ";\n";
    }
    os << "}\n";
  }
  return os.str();
}

namespace {

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::NatLit:
      if (a.lit != b.lit) return false;
      break;
    case Expr::Kind::VarRef:
    case Expr::Kind::Call:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::Arith:
      if (a.arith_op != b.arith_op) return false;
      break;
    case Expr::Kind::If:
      if (a.cmp_op != b.cmp_op) return false;
      break;
    case Expr::Kind::Choice:
      break;
  }
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (!expr_equal(*a.kids[i], *b.kids[i])) return false;
  }
  return true;
}

}  // namespace

bool structurally_equal(const Program& a, const Program& b) {
  if (a.functions.size() != b.functions.size()) return false;
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const FunctionDef& fa = a.functions[i];
    const FunctionDef& fb = b.functions[i];
    if (fa.name != fb.name || fa.params != fb.params ||
        fa.clauses.size() != fb.clauses.size()) {
      return false;
    }
    for (std::size_t j = 0; j < fa.clauses.size(); ++j) {
      const Clause& ca = fa.clauses[j];
      const Clause& cb = fb.clauses[j];
      if (ca.patterns.size() != cb.patterns.size()) return false;
      for (std::size_t k = 0; k < ca.patterns.size(); ++k) {
        const Pattern& pa = ca.patterns[k];
        const Pattern& pb = cb.patterns[k];
        if (pa.kind != pb.kind || pa.lit != pb.lit || pa.var != pb.var) {
          return false;
        }
      }
      if (!expr_equal(*ca.body, *cb.body)) return false;
    }
  }
  return true;
}

}  // namespace topo::dsl
