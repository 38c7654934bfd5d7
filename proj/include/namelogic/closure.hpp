#pragma once

#include <set>
#include <string>
#include <vector>

#include "namelogic/formula.hpp"

namespace namelogic {

/// Finite, negation-closed universe of formulas built from a query formula:
/// subformulas, single negations, the per-name seeds S[n] true and E[n] false,
/// S[n] f for every E[n] f, and E[n] f, E[n] C[n] f for every C[n] f.
struct Closure {
  /// Sorted by size, then structure; desugared.
  std::vector<Formula> formulas;
  std::set<std::string> names;
  std::set<std::string> propositions;

  bool contains(const Formula& f) const;
  std::size_t size() const { return formulas.size(); }
};

/// Throws UnsupportedFragment when chi contains D or B.
Closure closure(const Formula& chi);

}  // namespace namelogic
