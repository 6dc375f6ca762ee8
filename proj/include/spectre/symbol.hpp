#pragma once

// Pseudodifferential symbols near a base point. A symbol is an Expr over
// xi (XI), the inverse metric and its coordinate jets (G), a^m and its jets (A),
// b and its jets (B); h counts powers of sigma_2 = g^{mn}(x) xi_m xi_n.
// Symbols stay in jet form through every composition and are reduced to
// Riemann normal coordinates only at the end (at_base_point).

#include <stdexcept>

#include "spectre/exact.hpp"
#include "spectre/tensor.hpp"

namespace spectre {

struct JetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct JetRules {
  // d^2_{mu nu} sigma_2^{-1} -> c R^{rho sigma}_{mu nu} xi_rho xi_sigma sigma_2^{-2} at the base point.
  Rational d2_inverse_sigma2 = rational(1, 3);
  RMode rmode = RMode::Full;
};

// Jet-form symbols: xi.xi is not folded, g.xi.xi is.
TensorCtx symbol_ctx();
// Base-point expressions: flat metric, full Riemann symmetries.
TensorCtx base_ctx(std::optional<int> dim = std::nullopt, RMode mode = RMode::Full);

// Labels 990..998 are used internally by compose and must not appear free in operands.
constexpr int kComposeLabelBase = 990;

Expr xi_derivative(const Expr& e, int k);
Expr x_derivative(const Expr& e, int k);

// sigma(P o Q) = sum_alpha (-i)^|alpha| / alpha! d_xi^alpha sigma(P) d_x^alpha sigma(Q),
// dropping every term of degree < cutoff.
Expr compose(const Expr& P, const Expr& Q, int cutoff);

// Riemann normal evaluation: g -> delta, dg -> 0, d^2 g -> curvature, da kept, d^2 a -> 0,
// b kept, db -> 0. Higher jets throw JetExhausted.
Expr at_base_point(const Expr& e, const JetRules& rules = {});

// sigma_2 -> 1 on a base-point expression.
Expr mod_xi(const Expr& e, RMode mode = RMode::Full);

// sigma_2^(h/2)
Expr sigma2_pow(int h);
// sigma_2 + i a^m xi_m + b
Expr sigma_D2();

}  // namespace spectre
