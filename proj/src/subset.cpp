#include "topocover/subset.hpp"

#include <algorithm>

#include "topocover/error.hpp"

namespace topo {

Subset Subset::finite(std::vector<Element> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()),
                 elements.end());
  Subset s;
  s.kind_ = Kind::Finite;
  s.elements_ = std::move(elements);
  return s;
}

Subset Subset::comparator(CmpKind kind, std::uint64_t bound) {
  Subset s;
  s.kind_ = Kind::Comparator;
  s.cmp_kind_ = kind;
  s.bound_ = bound;
  return s;
}

Subset Subset::union_of(std::vector<Subset> operands) {
  Subset s;
  s.kind_ = Kind::Compound;
  s.op_ = Op::Union;
  s.operands_ = std::move(operands);
  return s;
}

Subset Subset::intersection_of(std::vector<Subset> operands) {
  Subset s;
  s.kind_ = Kind::Compound;
  s.op_ = Op::Intersection;
  s.operands_ = std::move(operands);
  return s;
}

Subset Subset::complement(Subset operand) {
  Subset s;
  s.kind_ = Kind::Compound;
  s.op_ = Op::Complement;
  s.operands_.push_back(std::move(operand));
  return s;
}

bool Subset::member(const Element& e) const {
  switch (kind_) {
    case Kind::Finite:
      return std::binary_search(elements_.begin(), elements_.end(), e);
    case Kind::Comparator: {
      if (!e.is_nat()) return false;
      std::uint64_t n = e.nat_value();
      switch (cmp_kind_) {
        case CmpKind::Even: return n % 2 == 0;
        case CmpKind::Odd: return n % 2 == 1;
        case CmpKind::LessThan: return n < bound_;
        case CmpKind::AtLeast: return n >= bound_;
      }
      return false;
    }
    case Kind::Compound:
      switch (op_) {
        case Op::Union:
          for (const Subset& u : operands_) {
            if (u.member(e)) return true;
          }
          return false;
        case Op::Intersection:
          for (const Subset& u : operands_) {
            if (!u.member(e)) return false;
          }
          return true;
        case Op::Complement:
          if (operands_.size() != 1) {
            throw Error(Errc::InvalidInput,
                        "complement takes exactly one operand");
          }
          return !operands_[0].member(e);
      }
      return false;
  }
  return false;
}

}  // namespace topo
