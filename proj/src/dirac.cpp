#include "spectre/dirac.hpp"

#include <sstream>
#include <stdexcept>

#include "spectre/clifford.hpp"
#include "spectre/symbol.hpp"

namespace spectre {

namespace {

constexpr int kDerivLabel = 900;

const TensorCtx& op_ctx() {
  static const TensorCtx c;
  return c;
}

Expr single(const Gauss& c, Mono m) { return Expr::mono(c, std::move(m), op_ctx()); }

// Merge DX factors into one and re-add.
void add_merged(Expr* out, const Gauss& c, const Mono& m) {
  Mono r;
  r.h = m.h;
  std::vector<int> dx;
  for (const auto& x : m.f) {
    if (x.sym == Sym::DX)
      dx.insert(dx.end(), x.idx.begin(), x.idx.end());
    else
      r.f.push_back(x);
  }
  if (!dx.empty()) r.f.push_back(fac(Sym::DX, dx));
  out->add(c, r, op_ctx());
}

Mono relabel(const Mono& m, int from, int to) {
  Mono r = m;
  for (auto& x : r.f)
    for (auto& l : x.idx)
      if (l == from) l = to;
  return r;
}

Expr commutator(const Expr& x, const Expr& y) { return gamma_mul(x, y, op_ctx()) - gamma_mul(y, x, op_ctx()); }

Expr gam(std::vector<int> idx) { return single(1, Mono{0, {fac(Sym::GAM, std::move(idx))}}); }

}  // namespace

std::string invariant_name(Invariant v) {
  switch (v) {
    case Invariant::B: return "b";
    case Invariant::AA: return "a.a";
    case Invariant::DivA: return "div_a";
    case Invariant::R: return "R";
    case Invariant::T2: return "t2";
    case Invariant::Boundary: return "boundary";
  }
  return "?";
}

Rational ScalarInvariant::operator[](Invariant v) const {
  auto it = coeff.find(v);
  return it == coeff.end() ? Rational(0) : it->second;
}

bool ScalarInvariant::operator==(const ScalarInvariant& o) const {
  if (times_spinor_dim != o.times_spinor_dim) return false;
  for (Invariant v : {Invariant::B, Invariant::AA, Invariant::DivA, Invariant::R, Invariant::T2, Invariant::Boundary})
    if ((*this)[v] != o[v]) return false;
  return true;
}

std::string ScalarInvariant::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : coeff) {
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(c) << ")*" << invariant_name(v);
  }
  if (first) os << "0";
  std::string s = os.str();
  return times_spinor_dim ? "2^floor(p/2)*[" + s + "]" : s;
}

Expr op_derivative(const Expr& e, int label) {
  Expr out;
  for (const auto& [m, c] : e.terms())
    for (std::size_t q = 0; q < m.f.size(); ++q) {
      Sym s = m.f[q].sym;
      if (s == Sym::OM || s == Sym::T) {
        Mono r = m;
        r.f[q].sym = s == Sym::OM ? Sym::OM1 : Sym::T1;
        r.f[q].idx.push_back(label);
        out.add(c, r, op_ctx());
      } else if (s == Sym::OM1 || s == Sym::T1) {
        throw JetExhausted("second derivative of the connection or torsion");
      } else if (s != Sym::GAM && s != Sym::DX && s != Sym::DELTA && s != Sym::RSC && s != Sym::BND &&
                 s != Sym::TSQ) {
        throw std::logic_error("op_derivative: unexpected factor " + sym_name(s));
      }
    }
  return out;
}

Expr op_mul(const Expr& x, const Expr& y) {
  Expr out;
  for (const auto& [mx, cx] : x.terms()) {
    int dx = -1;
    for (std::size_t q = 0; q < mx.f.size(); ++q)
      if (mx.f[q].sym == Sym::DX) {
        if (dx >= 0 || mx.f[q].idx.size() != 1) throw std::invalid_argument("op_mul: left factor above first order");
        dx = static_cast<int>(q);
      }
    for (const auto& [my, cy] : y.terms()) {
      Expr ey = single(cy, my);
      if (dx < 0) {
        Expr prod = gamma_mul(single(cx, mx), ey, op_ctx());
        for (const auto& [m, c] : prod.terms()) add_merged(&out, c, m);
        continue;
      }
      const int label = mx.f[dx].idx[0];
      // free derivative labels come back after the product
      auto emit = [&](const Gauss& c, const Mono& m) {
        add_merged(&out, c, label < kDummyBase ? relabel(m, kDerivLabel, label) : m);
      };
      Mono rest = relabel(mx, label, kDerivLabel);
      rest.f.erase(rest.f.begin() + dx);
      Expr ex = single(cx, rest);
      // d_l (y .) = (d_l y) + y d_l
      Expr hit = gamma_mul(ex, op_derivative(ey, kDerivLabel), op_ctx());
      for (const auto& [m, c] : hit.terms()) emit(c, m);
      Expr pass = gamma_mul(ex, ey, op_ctx());
      for (const auto& [m, c] : pass.terms()) {
        Mono r = m;
        r.f.push_back(fac(Sym::DX, {kDerivLabel}));
        emit(c, r);
      }
    }
  }
  return out;
}

Expr spin_connection(int m) {
  return single(rational(1, 4), Mono{0, {fac(Sym::OM, {m, kDummyBase, kDummyBase + 1}),
                                          fac(Sym::GAM, {kDummyBase, kDummyBase + 1})}});
}

Expr torsion_matrix(int m) {
  return single(rational(1, 2), Mono{0, {fac(Sym::T, {m, kDummyBase, kDummyBase + 1}),
                                          fac(Sym::GAM, {kDummyBase, kDummyBase + 1})}});
}

namespace {

struct Pieces {
  Expr a_expected, div_a, aa, div_t, wt, tt, curvature, nabla_t, t_comm, christoffel, christoffel_a;
};

Pieces pieces(bool torsion) {
  const auto& ctx = op_ctx();
  auto conn = [&](int m) { return torsion ? spin_connection(m) + torsion_matrix(m) : spin_connection(m); };
  auto tor = [&](int m) { return torsion ? torsion_matrix(m) : Expr(); };
  Pieces p;
  p.a_expected = (spin_connection(1) + tor(1) * Gauss(3)) * Gauss(-2);
  p.div_a = op_derivative(p.a_expected, 1);
  p.aa = gamma_mul(p.a_expected, p.a_expected, ctx);
  p.div_t = op_derivative(tor(1), 1);
  p.wt = commutator(spin_connection(1), tor(1));
  p.tt = gamma_mul(tor(1), tor(1), ctx);
  Expr g12 = gam({1, 2});
  Expr f = op_derivative(spin_connection(2), 1) - op_derivative(spin_connection(1), 2) +
           commutator(spin_connection(1), spin_connection(2));
  p.curvature = gamma_mul(g12, f, ctx) * Gauss(rational(1, 2));
  p.nabla_t = gamma_mul(g12, op_derivative(tor(2), 1) + commutator(spin_connection(1), tor(2)), ctx);
  p.t_comm = gamma_mul(g12, commutator(tor(1), tor(2)), ctx) * Gauss(rational(1, 2));
  p.christoffel = gamma_mul(gam({2}), commutator(spin_connection(2), gam({1})), ctx);
  p.christoffel_a = gamma_mul(p.christoffel, conn(1), ctx);
  return p;
}

}  // namespace

DiracSquare square_dirac(bool torsion) {
  const auto& ctx = op_ctx();
  Expr D = single(1, Mono{0, {fac(Sym::GAM, {kDummyBase}), fac(Sym::DX, {kDummyBase})}});
  D += gamma_mul(gam({1}), spin_connection(1), ctx);
  if (torsion) D += gamma_mul(gam({1}), torsion_matrix(1), ctx);
  Expr D2 = op_mul(D, D);

  DiracSquare r;
  r.torsion = torsion;
  Expr a_raw, b_raw;
  for (const auto& [m, c] : D2.terms()) {
    const Factor* dx = nullptr;
    for (const auto& x : m.f)
      if (x.sym == Sym::DX) dx = &x;
    if (!dx) {
      b_raw.add_canonical(c, m);
    } else if (dx->idx.size() == 2) {
      r.leading.add_canonical(c, m);
    } else {
      Mono s = relabel(m, dx->idx[0], 1);
      for (std::size_t q = 0; q < s.f.size(); ++q)
        if (s.f[q].sym == Sym::DX) s.f.erase(s.f.begin() + static_cast<long>(q--));
      a_raw.add(c, s, ctx);
    }
  }
  Pieces p = pieces(torsion);
  r.christoffel = p.christoffel;
  r.a = a_raw - p.christoffel;
  r.a_matches = r.a == p.a_expected;
  r.b = b_raw - p.christoffel_a;
  Expr resid = r.b - (p.div_a * Gauss(rational(1, 2)) - p.aa * Gauss(rational(1, 4)) + p.wt * Gauss(2) +
                      p.tt * Gauss(4) + p.curvature + p.nabla_t + p.t_comm);
  if (resid.is_zero()) {
    r.div_t_coeff = Rational(0);
  } else if (!p.div_t.is_zero()) {
    const auto& [m0, c0] = *p.div_t.terms().begin();
    Gauss k = resid.coeff_of(m0) / c0;
    if (k.is_real() && resid == p.div_t * k) r.div_t_coeff = k.re();
  }
  r.b_matches = r.div_t_coeff.has_value();
  r.b_terms = {{"div_a", rational(1, 2)}, {"a.a", rational(-1, 4)}, {"R", rational(1, 4)}};
  if (torsion && r.div_t_coeff)
    r.b_terms.insert(r.b_terms.end(), {{"div_T", *r.div_t_coeff},
                                       {"[w,T]", Rational(2)},
                                       {"T.T", Rational(4)},
                                       {"gamma[nabla,T]", Rational(1)},
                                       {"gamma[T,T]", rational(1, 2)}});
  return r;
}

Expr lichnerowicz_combination(bool torsion) {
  DiracSquare s = square_dirac(torsion);
  if (!s.a_matches || !s.b_matches) throw std::logic_error("Dirac square does not have the expected form");
  Pieces p = pieces(torsion);
  Expr e = s.b - p.curvature - p.nabla_t + p.aa * Gauss(rational(1, 4)) - p.div_a * Gauss(rational(1, 2));
  e += single(rational(1, 4), Mono{0, {fac(Sym::RSC, {})}});
  if (torsion) e += single(1, Mono{0, {fac(Sym::BND, {})}});
  return e;
}

Expr torsion_square() { return gamma_mul(torsion_matrix(1), torsion_matrix(1), op_ctx()); }

Expr torsion_commutator() {
  return gamma_mul(gam({1, 2}), commutator(torsion_matrix(1), torsion_matrix(2)), op_ctx()) *
         Gauss(rational(1, 2));
}

ScalarInvariant trace_reduce(const Expr& e, int p) {
  TensorCtx ctx;
  ctx.dim = p;
  const Mono tsq = canonicalize(Mono{0, {fac(Sym::T, {1000, 1001, 1002}), fac(Sym::T, {1000, 1001, 1002})}}, ctx)
                       ->second;
  for (const auto& [m, c] : e.terms())
    if (m.has(Sym::DX)) throw std::invalid_argument("trace_reduce: operator with derivative part");
  Expr tr = spinor_trace(e, p);
  const Rational d(spinor_dim(p));
  ScalarInvariant out;
  out.times_spinor_dim = true;
  for (const auto& [m, c] : tr.terms()) {
    if (!c.is_real()) throw std::logic_error("trace_reduce: non-real coefficient");
    Invariant v;
    if (m == tsq || (m.f.size() == 1 && m.f[0].sym == Sym::TSQ))
      v = Invariant::T2;
    else if (m.f.size() == 1 && m.f[0].sym == Sym::RSC)
      v = Invariant::R;
    else if (m.f.size() == 1 && m.f[0].sym == Sym::BND)
      v = Invariant::Boundary;
    else
      throw std::logic_error("trace_reduce: term does not reduce: " + mono_str(m));
    out.coeff[v] += c.re() / d;
  }
  for (auto it = out.coeff.begin(); it != out.coeff.end();)
    it = it->second == 0 ? out.coeff.erase(it) : std::next(it);
  return out;
}

}  // namespace spectre
