#include "spectre/clifford.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

namespace spectre {

namespace {

GMatrix pauli(int k) {
  GMatrix m(2, 2);
  switch (k) {
    case 1:
      m(0, 1) = m(1, 0) = Gauss(1);
      break;
    case 2:
      m(0, 1) = Gauss(0, -1);
      m(1, 0) = Gauss(0, 1);
      break;
    default:
      m(0, 0) = Gauss(1);
      m(1, 1) = Gauss(-1);
  }
  return m;
}

// q Hermitian matrices squaring to one and pairwise anticommuting, q even.
std::vector<GMatrix> hermitian_ladder(int q) {
  std::vector<GMatrix> e;
  for (int k = 0; k < q; k += 2) {
    std::size_t n = e.empty() ? 1 : e.front().rows();
    for (auto& x : e) x = x.kron(pauli(3));
    e.push_back(GMatrix::identity(n).kron(pauli(1)));
    e.push_back(GMatrix::identity(n).kron(pauli(2)));
  }
  return e;
}

GMatrix product(const std::vector<GMatrix>& ms, std::size_t n) {
  GMatrix r = GMatrix::identity(n);
  for (const auto& m : ms) r = r * m;
  return r;
}

// Returns s with M == s * Id, if any.
std::optional<Gauss> scalar_of(const GMatrix& m) {
  Gauss s = m(0, 0);
  if (m == GMatrix::identity(m.rows()) * s) return s;
  return std::nullopt;
}

int unit_sign(const std::optional<Gauss>& s, const char* what) {
  if (s && *s == Gauss(1)) return 1;
  if (s && *s == Gauss(-1)) return -1;
  throw std::logic_error(std::string("real structure: ") + what + " is not +-1");
}

}  // namespace

long spinor_dim(int p) { return 1L << (p / 2); }

GammaSet build_gammas(Signature sig) {
  if (sig.r < 0 || sig.s < 0 || sig.p() < 1) throw std::invalid_argument("invalid signature");
  if (sig.p() > kMaxCliffordDim) throw std::invalid_argument("signature dimension above 12");
  int p = sig.p();
  int q = p - (p % 2);
  auto e = hermitian_ladder(q);
  if (p % 2 == 1) {
    if (p == 1) {
      e.push_back(GMatrix::identity(1));
    } else {
      std::size_t n = e.front().rows();
      e.push_back(product(e, n) * i_pow(q * (q - 1) / 2));
    }
  }
  GammaSet g;
  g.sig = sig;
  g.dim = e.front().rows();
  for (int a = 0; a < p; ++a) {
    // i e is anti-Hermitian and squares to -1; a further factor i flips the sign.
    g.gammas.push_back(e[a] * (a < sig.r ? Gauss::i() : Gauss(-1)));
  }
  return g;
}

GMatrix chirality(const GammaSet& g) {
  if (g.sig.s != 0) throw std::invalid_argument("chirality requires Euclidean signature");
  int p = g.sig.p();
  return product(g.gammas, g.dim) * i_pow((p + 1) / 2);
}

Gauss top_trace_factor(int p) {
  if (p % 2 == 0) return Gauss();
  static std::mutex mu;
  static std::map<int, Gauss> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  auto g = build_gammas({p, 0});
  Gauss t = product(g.gammas, g.dim).trace() / Gauss(static_cast<long>(g.dim));
  return cache[p] = t;
}

RealSigns reference_real_signs(int p) {
  static const int eps[8] = {1, 1, -1, -1, -1, -1, 1, 1};
  static const int epsp[8] = {1, -1, 1, 1, 1, -1, 1, 1};
  static const int epspp[8] = {1, 0, -1, 0, 1, 0, -1, 0};
  int k = ((p % 8) + 8) % 8;
  RealSigns r{eps[k], epsp[k], std::nullopt};
  if (k % 2 == 0) r.eps_double_prime = epspp[k];
  return r;
}

RealStructure find_real_structure(int p) {
  if (p < 1 || p > kMaxCliffordDim) throw std::invalid_argument("real structure: p out of range");
  auto g = build_gammas({p, 0});
  // conj(gamma^a) = s_a gamma^a
  std::vector<int> s(p);
  for (int a = 0; a < p; ++a) {
    GMatrix c = g.gammas[a].conj();
    if (c == g.gammas[a])
      s[a] = 1;
    else if (c == -g.gammas[a])
      s[a] = -1;
    else
      throw std::logic_error("real structure: generator neither real nor imaginary");
  }
  // Basis gamma^A: all subsets for even p; subsets of the first p-1 generators for odd p.
  int nb = p % 2 == 0 ? p : p - 1;
  std::vector<int> tries = p % 2 == 0 ? std::vector<int>{1} : std::vector<int>{1, -1};
  for (int ep : tries) {
    std::vector<unsigned> found;
    for (unsigned A = 0; A < (1u << nb); ++A) {
      int size = __builtin_popcount(A);
      bool ok = true;
      for (int a = 0; a < p && ok; ++a) {
        int in = (a < nb && (A >> a) & 1u) ? 1 : 0;
        int sign = ((size - in) % 2 == 0) ? 1 : -1;
        ok = sign * s[a] == ep;
      }
      if (ok) found.push_back(A);
    }
    if (found.empty()) continue;
    if (found.size() > 1) throw std::logic_error("real structure: solution not unique");
    std::vector<GMatrix> fs;
    for (int a = 0; a < nb; ++a)
      if ((found[0] >> a) & 1u) fs.push_back(g.gammas[a]);
    GMatrix C = product(fs, g.dim);
    for (std::size_t k = 0; k < g.dim * g.dim; ++k) {
      const Gauss& x = C(k / g.dim, k % g.dim);
      if (x.is_zero()) continue;
      if (x.norm2() != 1) throw std::logic_error("real structure: non-unit entry");
      C = C * x.conj();
      break;
    }
    if (C * C.adjoint() != GMatrix::identity(g.dim)) throw std::logic_error("real structure: C not unitary");
    RealStructure rs;
    rs.p = p;
    rs.C = C;
    rs.eps = unit_sign(scalar_of(C * C.conj()), "C conj(C)");
    for (int a = 0; a < p; ++a)
      if (C * g.gammas[a].conj() != g.gammas[a] * C * Gauss(ep))
        throw std::logic_error("real structure: generator relation fails");
    rs.eps_prime = ep;
    if (p % 2 == 0) {
      GMatrix w = chirality(g);
      GMatrix lhs = C * w.conj();
      GMatrix rhs = w * C;
      if (lhs == rhs)
        rs.eps_double_prime = 1;
      else if (lhs == -rhs)
        rs.eps_double_prime = -1;
      else
        throw std::logic_error("real structure: chirality relation fails");
    }
    return rs;
  }
  throw std::logic_error("real structure: no solution for p = " + std::to_string(p));
}

namespace {

struct GTerm {
  int sign;
  std::vector<std::pair<int, int>> deltas;
  std::vector<int> gam;
};

// gamma^a gamma^{[C]} = gamma^{[aC]} - sum_j (-1)^(j-1) delta^{a c_j} gamma^{[C \ c_j]}
void left_one(int a, const GTerm& t, std::vector<GTerm>* out) {
  GTerm top = t;
  top.gam.insert(top.gam.begin(), a);
  out->push_back(std::move(top));
  for (std::size_t j = 0; j < t.gam.size(); ++j) {
    GTerm r = t;
    r.sign = (j % 2 == 0) ? -t.sign : t.sign;
    r.deltas.emplace_back(a, t.gam[j]);
    r.gam.erase(r.gam.begin() + static_cast<long>(j));
    out->push_back(std::move(r));
  }
}

// gamma^{[A]} gamma^{[B]}
std::vector<GTerm> gam_product(const std::vector<int>& A, const std::vector<int>& B) {
  if (A.empty()) return {GTerm{1, {}, B}};
  int a = A.front();
  std::vector<int> rest(A.begin() + 1, A.end());
  std::vector<GTerm> out;
  for (const auto& t : gam_product(rest, B)) left_one(a, t, &out);
  // gamma^{[a A']} = gamma^a gamma^{[A']} + sum_j (-1)^(j-1) delta^{a a'_j} gamma^{[A' \ a'_j]}
  for (std::size_t j = 0; j < rest.size(); ++j) {
    std::vector<int> less = rest;
    less.erase(less.begin() + static_cast<long>(j));
    for (auto t : gam_product(less, B)) {
      if (j % 2 == 1) t.sign = -t.sign;
      t.deltas.emplace_back(a, rest[j]);
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<int> take_gam(Mono& m) {
  std::vector<int> g;
  for (std::size_t k = 0; k < m.f.size(); ++k)
    if (m.f[k].sym == Sym::GAM) {
      if (!g.empty()) throw std::logic_error("monomial with two gamma factors");
      g = m.f[k].idx;
      m.f.erase(m.f.begin() + static_cast<long>(k));
      --k;
    }
  return g;
}

}  // namespace

Expr gamma_mul(const Expr& x, const Expr& y, const TensorCtx& ctx) {
  Expr out;
  for (const auto& [mx, cx] : x.terms())
    for (const auto& [my, cy] : y.terms()) {
      Mono a = shift_dummies(mx, kFreshBase);
      Mono b = shift_dummies(my, kFreshBase + 500);
      auto ga = take_gam(a);
      auto gb = take_gam(b);
      Gauss c = cx * cy;
      for (const auto& t : gam_product(ga, gb)) {
        Mono m;
        m.h = a.h + b.h;
        m.f = a.f;
        m.f.insert(m.f.end(), b.f.begin(), b.f.end());
        for (auto [i, j] : t.deltas) m.f.push_back(fac(Sym::DELTA, {i, j}));
        if (!t.gam.empty()) m.f.push_back(fac(Sym::GAM, t.gam));
        out.add(c * Gauss(t.sign), m, ctx);
      }
    }
  return out;
}

Expr gamma_left(int a, const Expr& e, const TensorCtx& ctx) {
  Expr g = Expr::mono(Gauss(1), Mono{0, {fac(Sym::GAM, {a})}}, ctx);
  return gamma_mul(g, e, ctx);
}

Expr spinor_trace(const Expr& e, int p) {
  TensorCtx ctx;
  ctx.dim = p;
  Gauss d(spinor_dim(p));
  Gauss top = d * top_trace_factor(p);
  Expr out;
  for (const auto& [m0, c] : e.terms()) {
    Mono m = m0;
    auto g = take_gam(m);
    if (g.empty()) {
      out.add(c * d, m, ctx);
    } else if (p % 2 == 1 && static_cast<int>(g.size()) == p) {
      m.f.push_back(fac(Sym::EPS, g));
      out.add(c * top, m, ctx);
    }
  }
  return out;
}

Expr gamma_word_trace(const std::vector<int>& word, int p) {
  if (word.size() > 8) throw std::invalid_argument("gamma word longer than 8");
  TensorCtx ctx;
  ctx.dim = p;
  Expr acc(Gauss(1));
  for (auto it = word.rbegin(); it != word.rend(); ++it) acc = gamma_left(*it, acc, ctx);
  return spinor_trace(acc, p);
}

}  // namespace spectre
