#include "spectre/symbol.hpp"

#include <algorithm>

namespace spectre {

TensorCtx symbol_ctx() {
  TensorCtx c;
  c.flat = false;
  return c;
}

TensorCtx base_ctx(std::optional<int> dim, RMode mode) {
  TensorCtx c;
  c.dim = dim;
  c.rmode = mode;
  return c;
}

namespace {

int fresh_label(const Mono& m) { return std::max(m.max_label(), 3999) + 1; }

Mono without(const Mono& m, std::size_t q) {
  Mono r = m;
  r.f.erase(r.f.begin() + static_cast<long>(q));
  return r;
}

// Degree bounds of a non-empty expression.
int max_degree(const Expr& e) {
  auto d = e.degrees();
  return d.empty() ? 0 : d.front();
}

}  // namespace

Expr xi_derivative(const Expr& e, int k) {
  const TensorCtx ctx = symbol_ctx();
  Expr out;
  for (const auto& [m, c] : e.terms()) {
    for (std::size_t q = 0; q < m.f.size(); ++q) {
      if (m.f[q].sym != Sym::XI) continue;
      Mono r = without(m, q);
      r.f.push_back(fac(Sym::DELTA, {m.f[q].idx[0], k}));
      out.add(c, r, ctx);
    }
    if (m.h != 0) {
      // d/dxi_k sigma_2^(h/2) = h sigma_2^(h/2 - 1) g^{kn} xi_n
      Mono r = m;
      int n = fresh_label(m);
      r.h -= 2;
      r.f.push_back(fac(Sym::G, {k, n}));
      r.f.push_back(fac(Sym::XI, {n}));
      out.add(c * Gauss(m.h), r, ctx);
    }
  }
  return out;
}

Expr x_derivative(const Expr& e, int k) {
  const TensorCtx ctx = symbol_ctx();
  Expr out;
  for (const auto& [m, c] : e.terms()) {
    for (std::size_t q = 0; q < m.f.size(); ++q) {
      switch (m.f[q].sym) {
        case Sym::G:
        case Sym::A:
        case Sym::B: {
          Mono r = m;
          r.f[q].idx.push_back(k);
          out.add(c, r, ctx);
          break;
        }
        case Sym::XI:
        case Sym::DELTA:
          break;
        default:
          throw std::logic_error("x-derivative of a non-jet factor " + sym_name(m.f[q].sym));
      }
    }
    if (m.h != 0) {
      Mono r = m;
      int a = fresh_label(m);
      r.h -= 2;
      r.f.push_back(fac(Sym::G, {a, a + 1, k}));
      r.f.push_back(fac(Sym::XI, {a}));
      r.f.push_back(fac(Sym::XI, {a + 1}));
      out.add(c * Gauss(rational(m.h, 2)), r, ctx);
    }
  }
  return out;
}

Expr compose(const Expr& P, const Expr& Q, int cutoff) {
  const TensorCtx ctx = symbol_ctx();
  Expr out;
  if (P.is_zero() || Q.is_zero()) return out;
  const int qmax = max_degree(Q);
  const int nmax = max_degree(P) + qmax - cutoff;
  if (nmax > 8) throw std::invalid_argument("compose: cutoff too far below the leading degree");
  Expr dp = P.truncate_below(cutoff - qmax);
  Expr dq = Q;
  Gauss weight(1);
  for (int n = 0; n <= nmax; ++n) {
    if (n > 0) {
      int k = kComposeLabelBase + n - 1;
      dp = xi_derivative(dp, k).truncate_below(cutoff - qmax);
      if (dp.is_zero()) break;
      dq = x_derivative(dq, k).truncate_below(cutoff - (max_degree(dp)));
      if (dq.is_zero()) break;
      weight = weight * Gauss(0, -1) / Gauss(n);
    }
    for (const auto& [ma, ca] : dp.terms())
      for (const auto& [mb, cb] : dq.terms()) {
        if (ma.degree() + mb.degree() < cutoff) continue;
        Mono a = shift_dummies(ma, kFreshBase);
        Mono b = shift_dummies(mb, kFreshBase + 500);
        Mono r;
        r.h = a.h + b.h;
        r.f = a.f;
        r.f.insert(r.f.end(), b.f.begin(), b.f.end());
        out.add(weight * ca * cb, r, ctx);
      }
  }
  return out;
}

Expr at_base_point(const Expr& e, const JetRules& rules) {
  const TensorCtx ctx = base_ctx(std::nullopt, rules.rmode);
  const Gauss half_c = Gauss(rules.d2_inverse_sigma2 / 2);
  Expr out;
  using Alt = std::pair<Gauss, std::vector<Factor>>;
  for (const auto& [m, c] : e.terms()) {
    std::vector<Alt> acc{{c, {}}};
    bool zero = false;
    for (const auto& x : m.f) {
      std::vector<Alt> choices;
      const std::size_t n = x.idx.size();
      switch (x.sym) {
        case Sym::G:
          if (n == 2) {
            choices.push_back({1, {fac(Sym::DELTA, x.idx)}});
          } else if (n == 4) {
            const auto& i = x.idx;
            choices.push_back({-half_c, {fac(Sym::R, {i[0], i[1], i[2], i[3]})}});
            choices.push_back({-half_c, {fac(Sym::R, {i[0], i[1], i[3], i[2]})}});
          } else if (n > 4) {
            throw JetExhausted("metric jet of order " + std::to_string(n - 2));
          }
          break;
        case Sym::A:
          if (n <= 2) choices.push_back({1, {x}});
          else if (n > 3) throw JetExhausted("jet of a of order " + std::to_string(n - 1));
          break;
        case Sym::B:
          if (n == 0) choices.push_back({1, {x}});
          else if (n > 1) throw JetExhausted("jet of b of order " + std::to_string(n));
          break;
        default:
          choices.push_back({1, {x}});
      }
      if (choices.empty()) {
        zero = true;
        break;
      }
      std::vector<Alt> next;
      for (const auto& [ca, fa] : acc)
        for (const auto& [cc, fc] : choices) {
          auto f = fa;
          f.insert(f.end(), fc.begin(), fc.end());
          next.push_back({ca * cc, std::move(f)});
        }
      acc = std::move(next);
    }
    if (zero) continue;
    for (auto& [ca, f] : acc) out.add(ca, Mono{m.h, std::move(f)}, ctx);
  }
  return out;
}

Expr mod_xi(const Expr& e, RMode mode) {
  const TensorCtx ctx = base_ctx(std::nullopt, mode);
  Expr out;
  for (const auto& [m, c] : e.terms()) out.add(c, Mono{0, m.f}, ctx);
  return out;
}

Expr sigma2_pow(int h) {
  Expr e;
  e.add_canonical(1, Mono{h, {}});
  return e;
}

Expr sigma_D2() {
  const TensorCtx ctx = symbol_ctx();
  Expr e = sigma2_pow(2);
  e.add(Gauss::i(), Mono{0, {fac(Sym::A, {kDummyBase}), fac(Sym::XI, {kDummyBase})}}, ctx);
  e.add(1, Mono{0, {fac(Sym::B, {})}}, ctx);
  return e;
}

}  // namespace spectre
