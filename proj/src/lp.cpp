#include "spectre/lp.hpp"

#include <stdexcept>

namespace spectre {

LpResult simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                     const std::vector<double>& c) {
  const std::size_t m = A.size(), n = c.size();
  if (b.size() != m) throw std::invalid_argument("simplex: row count mismatch");
  constexpr double eps = 1e-12;
  // tableau rows 0..m-1 constraints, row m objective; columns n structural + m slack + rhs
  const std::size_t W = n + m + 1;
  std::vector<double> T((m + 1) * W, 0.0);
  auto at = [&](std::size_t r, std::size_t k) -> double& { return T[r * W + k]; };
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    if (A[r].size() != n) throw std::invalid_argument("simplex: column count mismatch");
    if (b[r] < 0) throw std::invalid_argument("simplex: origin must be feasible");
    for (std::size_t k = 0; k < n; ++k) at(r, k) = A[r][k];
    at(r, n + r) = 1;
    at(r, W - 1) = b[r];
    basis[r] = n + r;
  }
  for (std::size_t k = 0; k < n; ++k) at(m, k) = -c[k];

  LpResult res;
  while (true) {
    // Bland: smallest index with negative reduced cost
    std::size_t enter = W;
    for (std::size_t k = 0; k + 1 < W; ++k)
      if (at(m, k) < -eps) {
        enter = k;
        break;
      }
    if (enter == W) break;
    std::size_t leave = m;
    double best = 0;
    for (std::size_t r = 0; r < m; ++r) {
      double a = at(r, enter);
      if (a <= eps) continue;
      double ratio = at(r, W - 1) / a;
      if (leave == m || ratio < best - eps || (ratio <= best + eps && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == m) {
      res.status = LpResult::Status::Unbounded;
      return res;
    }
    double piv = at(leave, enter);
    for (std::size_t k = 0; k < W; ++k) at(leave, k) /= piv;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      double f = at(r, enter);
      if (f == 0) continue;
      for (std::size_t k = 0; k < W; ++k) at(r, k) -= f * at(leave, k);
    }
    basis[leave] = enter;
    ++res.pivots;
  }
  res.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) res.x[basis[r]] = at(r, W - 1);
  res.value = at(m, W - 1);
  return res;
}

}  // namespace spectre
