#include "spectre/wodzicki.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace spectre {

namespace blocks {

Expr times_sigma2(const Expr& e, int dh) {
  Expr out;
  for (const auto& [m, c] : e.terms()) out.add_canonical(c, Mono{m.h + dh, m.f});
  return out;
}

namespace {

constexpr int d0 = kDummyBase, d1 = kDummyBase + 1, d2 = kDummyBase + 2, d3 = kDummyBase + 3;

Expr base_mono(std::vector<Factor> f, RMode mode = RMode::Full) {
  return Expr::mono(1, Mono{0, std::move(f)}, base_ctx(std::nullopt, mode));
}

}  // namespace

Expr b() { return base_mono({fac(Sym::B, {})}); }

Expr a_xi_a_xi() {
  return base_mono({fac(Sym::A, {d0}), fac(Sym::XI, {d0}), fac(Sym::A, {d1}), fac(Sym::XI, {d1})});
}

Expr xi_da_xi() { return base_mono({fac(Sym::XI, {d0}), fac(Sym::A, {d1, d0}), fac(Sym::XI, {d1})}); }

Expr delta_R_xi_xi(RMode mode) {
  return base_mono({fac(Sym::DELTA, {d0, d1}), fac(Sym::R, {d2, d3, d0, d1}), fac(Sym::XI, {d2}), fac(Sym::XI, {d3})},
                   mode);
}

Expr xi_xi_R_xi_xi(RMode mode) {
  return base_mono({fac(Sym::XI, {d0}), fac(Sym::XI, {d1}), fac(Sym::R, {d2, d3, d0, d1}), fac(Sym::XI, {d2}),
                    fac(Sym::XI, {d3})},
                   mode);
}

}  // namespace blocks

using blocks::times_sigma2;

namespace {

Expr one() { return Expr(Gauss(1)); }

Gauss q(long n, long d = 1) { return Gauss(rational(n, d)); }

void check_depth(int depth) {
  if (depth < 0 || depth > 2) throw std::invalid_argument("parametrix depth must be in 0..2");
}

}  // namespace

Expr parametrix_D2_jet(int depth, ParametrixRoute route) {
  check_depth(depth);
  const Expr D2 = sigma_D2();
  const Expr P = sigma2_pow(-2);
  if (route == ParametrixRoute::Recursive) {
    Expr Q = P;
    for (int j = 1; j <= depth; ++j) {
      Expr c = compose(D2, Q, -j) - one();
      Q -= times_sigma2(c.component(-j), -2);
    }
    return Q;
  }
  // D^2 o P = 1 + r, so P o (1 + r)^-1 = P o sum_k (-r)^k.
  Expr r = compose(D2, P, -depth) - one();
  Expr inv = one(), term = one();
  for (int k = 1; k <= depth; ++k) {
    term = compose(term, -r, -depth);
    inv += term;
  }
  return compose(P, inv, -2 - depth);
}

Expr parametrix_D2(int depth, const JetRules& rules, ParametrixRoute route) {
  return at_base_point(parametrix_D2_jet(depth, route), rules);
}

Expr inverse_power_jet(int m) {
  if (m < 1) throw std::invalid_argument("inverse_power: m must be positive");
  static std::mutex mu;
  static std::map<int, Expr> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
  }
  Expr Q = m == 1 ? parametrix_D2_jet(2) : compose(inverse_power_jet(m - 1), parametrix_D2_jet(2), -2 * m - 2);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(m, Q);
  return Q;
}

InversePower inverse_power(int m, const JetRules& rules) {
  Expr Q = inverse_power_jet(m);
  InversePower r;
  r.m = m;
  r.lead = at_base_point(Q.component(-2 * m), rules);
  r.sub1 = at_base_point(Q.component(-2 * m - 1), rules);
  r.sub2 = at_base_point(Q.component(-2 * m - 2), rules);
  return r;
}

InversePower inverse_power_closed_form(int m, const JetRules& rules) {
  if (m < 1) throw std::invalid_argument("inverse_power: m must be positive");
  const TensorCtx ctx = base_ctx(std::nullopt, rules.rmode);
  const Expr P = parametrix_D2_jet(2);
  const Expr s3_jet = P.component(-3);
  const Expr s3 = at_base_point(s3_jet, rules);
  const Expr s4 = at_base_point(P.component(-4), rules);
  Expr xi1 = Expr::mono(1, Mono{0, {fac(Sym::XI, {1})}}, symbol_ctx());
  Expr xi_ds3 = at_base_point(xi1.mul(x_derivative(s3_jet, 1), symbol_ctx()), rules);

  const long mm = m;
  InversePower r;
  r.m = m;
  r.lead = sigma2_pow(-2 * m);
  r.sub1 = times_sigma2(s3, 2 - 2 * m) * q(mm);
  r.sub2 = times_sigma2(s4, 2 - 2 * m) * q(mm);
  r.sub2 += times_sigma2(s3.mul(s3, ctx), 4 - 2 * m) * q(mm * (mm - 1), 2);
  r.sub2 += times_sigma2(xi_ds3, -2 * m) * (Gauss::i() * q(mm * (mm - 1)));
  r.sub2 += times_sigma2(blocks::xi_xi_R_xi_xi(rules.rmode), -2 * m - 6) * q(-4 * mm * (mm + 1) * (mm - 1), 9);
  r.sub2 += times_sigma2(blocks::delta_R_xi_xi(rules.rmode), -2 * m - 4) * q(mm * (mm - 1), 6);
  return r;
}

AbsSymbol abs_symbol(const JetRules& rules) {
  const Expr D2 = sigma_D2();
  Expr S = sigma2_pow(1);
  for (int j = 1; j <= 2; ++j) {
    Expr c = D2 - compose(S, S, 2 - j);
    S += times_sigma2(c.component(2 - j), -1) * q(1, 2);
  }
  AbsSymbol a;
  a.jet = S;
  a.s1 = at_base_point(S.component(1), rules);
  a.s0 = at_base_point(S.component(0), rules);
  a.sm1 = at_base_point(S.component(-1), rules);
  return a;
}

Expr integrand_symbol(int p, EvenRoute route, const JetRules& rules) {
  if (p < 2) throw std::invalid_argument("integrand: p must be at least 2");
  if (p == 2) return Expr();
  if (p % 2 == 0) {
    int m = (p - 2) / 2;
    return route == EvenRoute::Shortcut ? inverse_power_closed_form(m, rules).sub2 : inverse_power(m, rules).sub2;
  }
  int m = (p - 1) / 2;
  Expr e = compose(abs_symbol(rules).jet, inverse_power_jet(m), -p).component(-p);
  return at_base_point(e, rules);
}

Expr integrand(int p, EvenRoute route, const JetRules& rules) {
  return mod_xi(integrand_symbol(p, route, rules), rules.rmode);
}

Expr cosphere_average(const Expr& e, int p, RMode mode) {
  if (p < 1) throw std::invalid_argument("cosphere_average: p must be positive");
  const TensorCtx ctx = base_ctx(p, mode);
  Expr out;
  for (const auto& [m, c] : e.terms()) {
    if (m.h != 0) throw std::invalid_argument("cosphere_average: expression not reduced mod |xi|");
    Mono rest;
    std::vector<int> xi;
    for (const auto& x : m.f) {
      if (x.sym == Sym::XI)
        xi.push_back(x.idx[0]);
      else
        rest.f.push_back(x);
    }
    if (xi.size() % 2 == 1) continue;
    if (xi.size() > 4) throw std::invalid_argument("cosphere_average: xi-degree above 4");
    if (xi.empty()) {
      out.add(c, m, ctx);
    } else if (xi.size() == 2) {
      Mono r = rest;
      r.f.push_back(fac(Sym::DELTA, {xi[0], xi[1]}));
      out.add(c * q(1, p), r, ctx);
    } else {
      const int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
      for (const auto& pr : pairings) {
        Mono r = rest;
        r.f.push_back(fac(Sym::DELTA, {xi[pr[0]], xi[pr[1]]}));
        r.f.push_back(fac(Sym::DELTA, {xi[pr[2]], xi[pr[3]]}));
        out.add(c * q(1, static_cast<long>(p) * (p + 2)), r, ctx);
      }
    }
  }
  return out;
}

ScalarInvariant cosphere_integrate(const Expr& e, int p) {
  const TensorCtx ctx = base_ctx(p);
  auto canon = [&](std::vector<Factor> f) { return canonicalize(Mono{0, std::move(f)}, ctx)->second; };
  const std::map<Mono, Invariant> basis = {
      {canon({fac(Sym::B, {})}), Invariant::B},
      {canon({fac(Sym::A, {1000}), fac(Sym::A, {1000})}), Invariant::AA},
      {canon({fac(Sym::A, {1000, 1000})}), Invariant::DivA},
      {canon({fac(Sym::R, {1000, 1000, 1001, 1001})}), Invariant::R},
  };
  ScalarInvariant out;
  const Expr avg = cosphere_average(e, p);
  for (const auto& [m, c] : avg.terms()) {
    auto it = basis.find(m);
    if (it == basis.end()) throw std::logic_error("cosphere_integrate: unexpected scalar " + mono_str(m));
    if (!c.is_real()) throw std::logic_error("cosphere_integrate: non-real coefficient");
    out.coeff[it->second] += c.re();
  }
  return out;
}

GravityAction gravity_action(int p, bool torsion, EvenRoute route, const JetRules& rules) {
  if (p < 2) throw std::invalid_argument("gravity_action: p must be at least 2");
  GravityAction g;
  g.p = p;
  g.torsion = torsion;
  g.c_p = volume_constant_exact(p);
  g.integrand = integrand(p, route, rules);
  g.averaged = cosphere_integrate(g.integrand, p);
  const Rational lambda = g.averaged[Invariant::B];
  if (g.averaged[Invariant::AA] != lambda / 4 || g.averaged[Invariant::DivA] != -lambda / 2)
    throw std::logic_error("integrand does not reduce to b + a.a/4 - div a/2");
  g.traced = trace_reduce(lichnerowicz_combination(torsion), std::max(p, 3));
  g.coeff_R = lambda * g.traced[Invariant::R] + g.averaged[Invariant::R];
  g.coeff_t2 = lambda * g.traced[Invariant::T2];
  return g;
}

Rational quadratic_form_coeff(int p) {
  if (p < 2) throw std::invalid_argument("quadratic_form_coeff: p must be at least 2");
  if (p == 2) return 0;
  return gravity_action(p, true).coeff_t2;
}

namespace reference {

using namespace blocks;

Expr sigma_m4(RMode mode) {
  Expr e = times_sigma2(b(), -4) * q(-1);
  e += times_sigma2(delta_R_xi_xi(mode), -6) * q(2, 3);
  e += times_sigma2(xi_da_xi(), -6) * q(2);
  e += times_sigma2(a_xi_a_xi(), -6) * q(-1);
  e += times_sigma2(xi_xi_R_xi_xi(mode), -8) * q(-4, 3);
  return e;
}

Expr even_integrand(int p, RMode mode) {
  const long P = p;
  Expr e = b() * q(-(P - 2), 2);
  e += xi_da_xi() * q(P * (P - 2), 4);
  e += a_xi_a_xi() * q(-P * (P - 2), 8);
  e += delta_R_xi_xi(mode) * q(P * (P - 2), 24);
  e += xi_xi_R_xi_xi(mode) * q(-(P - 2) * (P * P - 4 * P + 6), 18);
  return e;
}

Expr odd_integrand(int p, RMode mode) {
  const long P = p;
  Expr e = b() * q(-(P - 2), 2);
  e += xi_da_xi() * q(P * (P - 2), 4);
  e += a_xi_a_xi() * q(-P * (P - 2), 8);
  e += delta_R_xi_xi(mode) * q(P * (P - 2), 24);
  return e;
}

Expr abs_sigma_m1(RMode mode) {
  Expr e = b() * q(1, 2);
  e += a_xi_a_xi() * q(1, 2);
  e += xi_da_xi() * q(-1, 8);
  e += delta_R_xi_xi(mode) * q(-1, 24);
  return e;
}

}  // namespace reference

}  // namespace spectre
