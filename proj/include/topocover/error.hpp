#ifndef TOPOCOVER_ERROR_HPP
#define TOPOCOVER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace topo {

enum class Errc {
  InvalidInput,        // caller broke a documented precondition
  Overflow,            // checked natural arithmetic exceeded the cap
  IndexOutOfRange,     // index not in indexes(a)
  MissingLeafProof,    // grafting found a leaf with no replacement proof
  ImpossibleRefl,      // pi applied to a refl node: nothing is a member of the empty set
  NotAChild,           // pi asked for an element outside children(a)
  InvalidCertificate,  // certificate failed checking before evaluation
  GuardViolation,      // a functional queried a non-child element
  BudgetExhausted,     // exploration budget ran out where a definite answer was required
  NoMatchingClause,    // program input matched by no clause
  DivisionByZero,
  TypeError,           // arithmetic or comparison on a non-numeric element
  InvalidJson,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace topo

#endif
