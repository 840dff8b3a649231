#ifndef TOPOCOVER_ELEMENT_HPP
#define TOPOCOVER_ELEMENT_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace topo {

/// A finite constructor term naming a basic open / function input.
///
/// Three kinds share one universe: naturals (the arithmetic examples),
/// atoms (named graph nodes) and tuples (multi-argument inputs). Values
/// are immutable after construction and cheap enough to copy at the
/// scales this library targets.
class Element {
 public:
  enum class Kind { Nat, Atom, Tuple };

  /// Default-constructs Nat 0 so Element works in standard containers.
  Element() : repr_(std::uint64_t{0}) {}

  static Element nat(std::uint64_t value) { return Element(value); }

  /// `name` must be a non-empty identifier: [A-Za-z_][A-Za-z0-9_]*.
  /// Throws Error(InvalidInput) otherwise; the constraint is what keeps
  /// the text encoding injective.
  static Element atom(std::string name);

  static Element tuple(std::vector<Element> items) {
    return Element(std::move(items));
  }

  Kind kind() const { return static_cast<Kind>(repr_.index()); }
  bool is_nat() const { return kind() == Kind::Nat; }
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_tuple() const { return kind() == Kind::Tuple; }

  /// Valid only for the matching kind; enforced with Error(InvalidInput).
  std::uint64_t nat_value() const;
  const std::string& atom_name() const;
  const std::vector<Element>& items() const;

  /// Canonical text encoding: Nat as decimal digits, Atom as a bare
  /// identifier, Tuple as "(" item ("," item)* ")"; the empty tuple is
  /// "()". Injective over all elements.
  std::string encode() const;

  struct ParseError {
    std::size_t position = 0;
    std::string message;
  };

  /// Parses the canonical encoding (ASCII whitespace between tokens is
  /// tolerated). The whole input must be consumed. On failure returns
  /// nullopt and, when `error` is given, fills in position and message.
  static std::optional<Element> parse(std::string_view text,
                                      ParseError* error = nullptr);

  friend bool operator==(const Element& a, const Element& b) {
    return a.repr_ == b.repr_;
  }

  friend std::strong_ordering operator<=>(const Element& a, const Element& b);

 private:
  explicit Element(std::uint64_t v) : repr_(v) {}
  explicit Element(std::string s) : repr_(std::move(s)) {}
  explicit Element(std::vector<Element> v) : repr_(std::move(v)) {}

  std::variant<std::uint64_t, std::string, std::vector<Element>> repr_;
};

/// Total canonical order: Nat < Atom < Tuple across kinds; numeric,
/// lexicographic, and length-then-pointwise within kinds.
std::strong_ordering compare(const Element& a, const Element& b);

std::ostream& operator<<(std::ostream& os, const Element& e);

bool is_valid_atom_name(std::string_view name);

std::size_t hash_value(const Element& e);

// Checked natural arithmetic; nullopt on overflow. Subtraction is monus
// (truncated at zero) and therefore total.
std::optional<std::uint64_t> checked_add(std::uint64_t a, std::uint64_t b);
std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b);
inline std::uint64_t monus(std::uint64_t a, std::uint64_t b) {
  return a >= b ? a - b : 0;
}

}  // namespace topo

template <>
struct std::hash<topo::Element> {
  std::size_t operator()(const topo::Element& e) const {
    return topo::hash_value(e);
  }
};

#endif
