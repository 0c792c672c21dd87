// Machine-checkable inequality certificates shared by the truncation and
// energy checkers.
#pragma once

#include <string>

namespace aikawa {

struct InequalityCertificate {
  std::string name;
  double lhs = 0.0;
  double rhs_raw = 0.0;   // right side before the multiplier
  double constant = 1.0;  // multiplier applied to rhs_raw
  bool pass = false;      // lhs <= constant * rhs_raw
  std::string worst_case;
  double resolution = 0.0;  // grid cell size of the certified instance
  double s = 0.0, p = 0.0, q = 0.0;
};

}  // namespace aikawa
