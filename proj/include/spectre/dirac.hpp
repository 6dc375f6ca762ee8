#pragma once

// D = gamma^m (d_m + w_m + T_m) squared in elliptic form, and spinor traces of
// the resulting scalars. Operators are Expr sums whose monomials carry at most
// one GAM factor and at most one DX factor (derivatives ordered to the right);
// w_m = 1/4 w_{mab} gamma^{ab}, T_m = 1/2 t_{mab} gamma^{ab}, gammas constant at the base point.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectre/exact.hpp"
#include "spectre/tensor.hpp"

namespace spectre {

enum class Invariant { B, AA, DivA, R, T2, Boundary };

std::string invariant_name(Invariant v);

// Linear combination of formal scalars. With times_spinor_dim the whole
// combination is multiplied by 2^floor(p/2); boundary then means the trace of
// gamma^{mn}[nabla_m, T_n] per spinor dimension.
struct ScalarInvariant {
  std::map<Invariant, Rational> coeff;
  bool times_spinor_dim = false;

  Rational operator[](Invariant v) const;
  std::string str() const;
  bool operator==(const ScalarInvariant& o) const;
};

// Operator products; derivatives of w and t are jets (second jets are exhausted).
Expr op_mul(const Expr& x, const Expr& y);
Expr op_derivative(const Expr& e, int label);

Expr spin_connection(int m);  // w_m
Expr torsion_matrix(int m);   // T_m

struct DiracSquare {
  bool torsion = true;
  Expr leading;  // coefficient of the second-order part
  Expr a;        // free label 1; Christoffel term removed
  Expr b;        // Christoffel term removed
  Expr christoffel;  // gamma^m [w_m, gamma^l], free label 1; zero in Riemann normal coordinates
  bool a_matches = false;  // a == -2 (w + 3T)
  // b = 1/2 div a - 1/4 a.a + k div T + 2 [w,T] + 4 T.T + 1/2 gamma^{mn}[nabla_m,nabla_n]
  //     + gamma^{mn}[nabla_m,T_n] + 1/2 gamma^{mn}[T_m,T_n]; k when the residual has this form.
  std::optional<Rational> div_t_coeff;
  bool b_matches = false;
  // b as named pieces with the curvature term rewritten to R/4.
  std::vector<std::pair<std::string, Rational>> b_terms;
};

DiracSquare square_dirac(bool torsion);

// b + a.a/4 - div a/2 with gamma^{mn}[nabla_m,nabla_n] -> R/2 and gamma^{mn}[nabla_m,T_n]
// kept as the formal BND factor.
Expr lichnerowicz_combination(bool torsion);

// Spinor trace of an operator expression without derivatives, in the formal basis.
// Throws when a term does not reduce to R, t^2 or the boundary symbol.
ScalarInvariant trace_reduce(const Expr& e, int p);

// T^m T_m and 1/2 gamma^{mn}[T_m, T_n]
Expr torsion_square();
Expr torsion_commutator();

}  // namespace spectre
