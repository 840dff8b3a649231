#include "topocover/element.hpp"

#include <cctype>
#include <charconv>
#include <ostream>
#include <sstream>

#include "topocover/error.hpp"

namespace topo {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::Overflow: return "Overflow";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::MissingLeafProof: return "MissingLeafProof";
    case Errc::ImpossibleRefl: return "ImpossibleRefl";
    case Errc::NotAChild: return "NotAChild";
    case Errc::InvalidCertificate: return "InvalidCertificate";
    case Errc::GuardViolation: return "GuardViolation";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::NoMatchingClause: return "NoMatchingClause";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::TypeError: return "TypeError";
    case Errc::InvalidJson: return "InvalidJson";
  }
  return "UnknownError";
}

bool is_valid_atom_name(std::string_view name) {
  if (name.empty()) return false;
  auto head = static_cast<unsigned char>(name[0]);
  if (!std::isalpha(head) && name[0] != '_') return false;
  for (char c : name.substr(1)) {
    auto uc = static_cast<unsigned char>(c);
    if (!std::isalnum(uc) && c != '_') return false;
  }
  return true;
}

Element Element::atom(std::string name) {
  if (!is_valid_atom_name(name)) {
    throw Error(Errc::InvalidInput, "invalid atom name: \"" + name + "\"");
  }
  return Element(std::move(name));
}

std::uint64_t Element::nat_value() const {
  if (!is_nat()) throw Error(Errc::InvalidInput, "element is not a Nat");
  return std::get<std::uint64_t>(repr_);
}

const std::string& Element::atom_name() const {
  if (!is_atom()) throw Error(Errc::InvalidInput, "element is not an Atom");
  return std::get<std::string>(repr_);
}

const std::vector<Element>& Element::items() const {
  if (!is_tuple()) throw Error(Errc::InvalidInput, "element is not a Tuple");
  return std::get<std::vector<Element>>(repr_);
}

std::strong_ordering compare(const Element& a, const Element& b) {
  if (a.kind() != b.kind()) {
    return static_cast<int>(a.kind()) <=> static_cast<int>(b.kind());
  }
  switch (a.kind()) {
    case Element::Kind::Nat:
      return a.nat_value() <=> b.nat_value();
    case Element::Kind::Atom:
      return a.atom_name().compare(b.atom_name()) <=> 0;
    case Element::Kind::Tuple: {
      const auto& xs = a.items();
      const auto& ys = b.items();
      if (auto c = xs.size() <=> ys.size(); c != 0) return c;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (auto c = compare(xs[i], ys[i]); c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Element& a, const Element& b) {
  return compare(a, b);
}

namespace {

void encode_into(const Element& e, std::string& out) {
  switch (e.kind()) {
    case Element::Kind::Nat:
      out += std::to_string(e.nat_value());
      break;
    case Element::Kind::Atom:
      out += e.atom_name();
      break;
    case Element::Kind::Tuple: {
      out += '(';
      bool first = true;
      for (const Element& item : e.items()) {
        if (!first) out += ',';
        first = false;
        encode_into(item, out);
      }
      out += ')';
      break;
    }
  }
}

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  std::optional<Element> term(Element::ParseError* error) {
    skip_ws();
    if (pos >= text.size()) {
      return fail(error, "unexpected end of input");
    }
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) return nat(error);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return atom(error);
    }
    if (c == '(') return tuple(error);
    return fail(error, std::string("unexpected character '") + c + "'");
  }

  std::optional<Element> nat(Element::ParseError* error) {
    std::size_t start = pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    std::uint64_t value = 0;
    auto first = text.data() + start;
    auto last = text.data() + pos;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
      pos = start;
      return fail(error, "natural literal out of range");
    }
    return Element::nat(value);
  }

  std::optional<Element> atom(Element::ParseError* error) {
    std::size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        ++pos;
      } else {
        break;
      }
    }
    std::string name(text.substr(start, pos - start));
    if (!is_valid_atom_name(name)) {
      pos = start;
      return fail(error, "invalid identifier");
    }
    return Element::atom(std::move(name));
  }

  std::optional<Element> tuple(Element::ParseError* error) {
    ++pos;  // '('
    std::vector<Element> items;
    skip_ws();
    if (pos < text.size() && text[pos] == ')') {
      ++pos;
      return Element::tuple(std::move(items));
    }
    while (true) {
      auto item = term(error);
      if (!item) return std::nullopt;
      items.push_back(std::move(*item));
      skip_ws();
      if (pos >= text.size()) {
        return fail(error, "unterminated tuple");
      }
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (text[pos] == ')') {
        ++pos;
        return Element::tuple(std::move(items));
      }
      return fail(error, "expected ',' or ')' in tuple");
    }
  }

  std::optional<Element> fail(Element::ParseError* error, std::string msg) {
    if (error) {
      error->position = pos;
      error->message = std::move(msg);
    }
    return std::nullopt;
  }
};

}  // namespace

std::string Element::encode() const {
  std::string out;
  encode_into(*this, out);
  return out;
}

std::optional<Element> Element::parse(std::string_view text,
                                      ParseError* error) {
  Parser p{text};
  auto result = p.term(error);
  if (!result) return std::nullopt;
  if (!p.at_end()) {
    if (error) {
      error->position = p.pos;
      error->message = "trailing input after element";
    }
    return std::nullopt;
  }
  return result;
}

std::ostream& operator<<(std::ostream& os, const Element& e) {
  return os << e.encode();
}

std::size_t hash_value(const Element& e) {
  auto mix = [](std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  };
  switch (e.kind()) {
    case Element::Kind::Nat:
      return mix(0x01, std::hash<std::uint64_t>{}(e.nat_value()));
    case Element::Kind::Atom:
      return mix(0x02, std::hash<std::string>{}(e.atom_name()));
    case Element::Kind::Tuple: {
      std::size_t seed = 0x03;
      for (const Element& item : e.items()) seed = mix(seed, hash_value(item));
      return mix(seed, e.items().size());
    }
  }
  return 0;
}

std::optional<std::uint64_t> checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) return std::nullopt;
  return r;
}

std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
  return r;
}

}  // namespace topo
