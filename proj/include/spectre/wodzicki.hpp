#pragma once

// Parametrices, inverse powers and |D| for D^2 = sigma_2 + i a.xi + b in symbol
// form, the residue integrand of |D|^{2-p}, its cosphere average, and the
// gravity action coefficients as rational multiples of c(p).

#include <vector>

#include "spectre/dirac.hpp"
#include "spectre/exact.hpp"
#include "spectre/model_triples.hpp"
#include "spectre/symbol.hpp"

namespace spectre {

enum class ParametrixRoute { Recursive, GeometricSeries };

// Jet-form symbol of D^-2 through degree -2 - depth, depth <= 2.
Expr parametrix_D2_jet(int depth = 2, ParametrixRoute route = ParametrixRoute::Recursive);
// The same at the base point.
Expr parametrix_D2(int depth = 2, const JetRules& rules = {}, ParametrixRoute route = ParametrixRoute::Recursive);

// Jet-form symbol of D^-2m through degree -2m - 2, as sigma(D^-2m+2) o sigma(D^-2).
Expr inverse_power_jet(int m);

struct InversePower {
  int m = 1;
  Expr lead;  // sigma_2^-m
  Expr sub1;  // sigma_{-2m-1}
  Expr sub2;  // sigma_{-2m-2}
};

InversePower inverse_power(int m, const JetRules& rules = {});

// The recursion solved in closed form, fed with the computed sigma_-3 and sigma_-4:
// sub1 = m s^(1-m) sigma_-3, sub2 = m s^(1-m) sigma_-4 + m(m-1)/2 s^(2-m) sigma_-3^2
//   + i m(m-1) s^-m xi^k d_k sigma_-3 - 4m(m+1)(m-1)/9 s^(-m-3) xi xi R xi xi
//   + m(m-1)/6 s^(-m-2) delta R xi xi.
InversePower inverse_power_closed_form(int m, const JetRules& rules = {});

struct AbsSymbol {
  Expr jet;  // degrees 1, 0, -1 in jet form
  Expr s1, s0, sm1;  // base point
};

AbsSymbol abs_symbol(const JetRules& rules = {});

enum class EvenRoute { Shortcut, Generic };

// sigma_{-p}(|D|^{2-p}) at the base point, before sigma_2 -> 1.
Expr integrand_symbol(int p, EvenRoute route = EvenRoute::Shortcut, const JetRules& rules = {});
// The same mod |xi|.
Expr integrand(int p, EvenRoute route = EvenRoute::Shortcut, const JetRules& rules = {});

// Moment replacement: xi^m xi^n -> delta/p, quartic -> symmetrized delta delta / (p(p+2)), odd -> 0.
Expr cosphere_average(const Expr& e, int p, RMode mode = RMode::Full);
// Average expressed in the formal basis (matrix level: b, a.a, div a; R times the identity).
ScalarInvariant cosphere_integrate(const Expr& e, int p);

struct GravityAction {
  int p = 0;
  bool torsion = true;
  Rational coeff_R;   // times c(p)
  Rational coeff_t2;  // times c(p)
  PiMultiple c_p;
  Expr integrand;
  ScalarInvariant averaged;  // cosphere average of the integrand
  ScalarInvariant traced;    // trace of b + a.a/4 - div a/2
};

GravityAction gravity_action(int p, bool torsion, EvenRoute route = EvenRoute::Shortcut, const JetRules& rules = {});

// Coefficient of the t^2 quadratic form as a multiple of c(p); 0 at p = 2.
Rational quadratic_form_coeff(int p);

// Reference expressions, canonicalized in the given mode.
namespace reference {
Expr sigma_m4(RMode mode = RMode::Full);
Expr even_integrand(int p, RMode mode = RMode::Full);
Expr odd_integrand(int p, RMode mode = RMode::Full);
Expr abs_sigma_m1(RMode mode = RMode::Full);
}  // namespace reference

// Building blocks at the base point (dummy labels).
namespace blocks {
Expr b();
Expr a_xi_a_xi();
Expr xi_da_xi();  // xi^m a^r_{,m} xi_r
Expr delta_R_xi_xi(RMode mode = RMode::Full);  // delta^{mn} R^{rs}_{mn} xi_r xi_s
Expr xi_xi_R_xi_xi(RMode mode = RMode::Full);  // xi^m xi^n R^{rs}_{mn} xi_r xi_s
// e * sigma_2^(dh/2)
Expr times_sigma2(const Expr& e, int dh);
}  // namespace blocks

}  // namespace spectre
