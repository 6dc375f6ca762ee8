#pragma once

#include <vector>

namespace spectre {

// maximize c.x  subject to  A x <= b, x >= 0, with b >= 0 (the origin is feasible).
// Dense tableau simplex with Bland's rule.
struct LpResult {
  enum class Status { Optimal, Unbounded };
  Status status = Status::Optimal;
  double value = 0;
  std::vector<double> x;
  int pivots = 0;
};

LpResult simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                     const std::vector<double>& c);

}  // namespace spectre
