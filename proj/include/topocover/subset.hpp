#ifndef TOPOCOVER_SUBSET_HPP
#define TOPOCOVER_SUBSET_HPP

#include <cstdint>
#include <vector>

#include "topocover/element.hpp"

namespace topo {

/// A decidable subset of the element universe. Membership always
/// terminates; that is the whole contract. Comparator kinds apply to
/// Nat elements only and are false on everything else.
class Subset {
 public:
  enum class Kind { Finite, Comparator, Compound };
  enum class CmpKind { Even, Odd, LessThan, AtLeast };
  enum class Op { Union, Intersection, Complement };

  /// The empty subset, Finite([]).
  Subset() = default;

  /// Sorts by the canonical order and drops duplicates.
  static Subset finite(std::vector<Element> elements);
  static Subset empty() { return Subset(); }

  static Subset even() { return comparator(CmpKind::Even, 0); }
  static Subset odd() { return comparator(CmpKind::Odd, 0); }
  static Subset less_than(std::uint64_t k) {
    return comparator(CmpKind::LessThan, k);
  }
  static Subset at_least(std::uint64_t k) {
    return comparator(CmpKind::AtLeast, k);
  }

  static Subset union_of(std::vector<Subset> operands);
  static Subset intersection_of(std::vector<Subset> operands);
  static Subset complement(Subset operand);

  /// The whole universe, expressed as the complement of the empty set.
  static Subset universal() { return complement(empty()); }

  bool member(const Element& e) const;

  Kind kind() const { return kind_; }
  const std::vector<Element>& elements() const { return elements_; }
  CmpKind cmp_kind() const { return cmp_kind_; }
  std::uint64_t cmp_bound() const { return bound_; }
  Op op() const { return op_; }
  const std::vector<Subset>& operands() const { return operands_; }

 private:
  static Subset comparator(CmpKind kind, std::uint64_t bound);

  Kind kind_ = Kind::Finite;
  std::vector<Element> elements_;  // Finite: sorted, duplicate-free
  CmpKind cmp_kind_ = CmpKind::Even;
  std::uint64_t bound_ = 0;
  Op op_ = Op::Union;
  std::vector<Subset> operands_;
};

inline bool member(const Subset& u, const Element& e) { return u.member(e); }

}  // namespace topo

#endif
