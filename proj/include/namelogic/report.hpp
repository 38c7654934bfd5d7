#pragma once

#include <string>
#include <vector>

namespace namelogic {

struct MorphismViolation {
  std::string state;
  std::string name;
  /// "there", "back", "atoms", or a bisimulation clause "0", "1", "2".
  std::string condition;
  std::string detail;
};

struct MorphismCheckReport {
  std::vector<MorphismViolation> violations;

  bool ok() const { return violations.empty(); }
};

}  // namespace namelogic
