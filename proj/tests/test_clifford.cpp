#include <chrono>
#include <functional>

#include "doctest.h"
#include "oracles/gamma_numeric.hpp"
#include "spectre/clifford.hpp"

using namespace spectre;

namespace {

GMatrix eta_id(const GammaSet& g, int a, int b) {
  int eta = a != b ? 0 : (a < g.sig.r ? 1 : -1);
  return GMatrix::identity(g.dim) * Gauss(-2 * eta);
}

}  // namespace

TEST_SUITE("clifford") {

TEST_CASE("anticommutators and hermiticity") {
  for (int p = 1; p <= 7; ++p)
    for (int s = 0; s <= p; ++s) {
      auto g = build_gammas({p - s, s});
      CHECK(g.dim == static_cast<std::size_t>(spinor_dim(p)));
      REQUIRE(g.gammas.size() == static_cast<std::size_t>(p));
      for (int a = 0; a < p; ++a) {
        for (int b = a; b < p; ++b) CHECK(anticommutator(g.gammas[a], g.gammas[b]) == eta_id(g, a, b));
        if (a < g.sig.r)
          CHECK(g.gammas[a].adjoint() == -g.gammas[a]);
        else
          CHECK(g.gammas[a].adjoint() == g.gammas[a]);
      }
    }
  auto big = build_gammas({12, 0});
  CHECK(big.dim == 64);
  CHECK(anticommutator(big.gammas[0], big.gammas[11]).is_zero());
  CHECK((big.gammas[11] * big.gammas[11]) == -GMatrix::identity(64));
  CHECK_THROWS(build_gammas({13, 0}));
  CHECK_THROWS(build_gammas({0, 0}));
  CHECK_THROWS(build_gammas({-1, 2}));
}

TEST_CASE("one dimension") {
  auto g = build_gammas({1, 0});
  REQUIRE(g.dim == 1);
  CHECK(g.gammas[0](0, 0) == Gauss::i());
}

TEST_CASE("signature (1,1) matches the real 2x2 pair up to basis change") {
  auto g = build_gammas({1, 1});
  GMatrix v1(2, 2), v2(2, 2);
  v1(0, 1) = Gauss(1);
  v1(1, 0) = Gauss(-1);
  v2(0, 0) = Gauss(1);
  v2(1, 1) = Gauss(-1);
  CHECK((v1 * v1) == (g.gammas[0] * g.gammas[0]));
  CHECK((v2 * v2) == (g.gammas[1] * g.gammas[1]));
  CHECK(anticommutator(v1, v2).is_zero());
  // S with S gamma^a = v_a S: linear system on the 4 entries of S.
  std::vector<std::vector<Gauss>> rows;
  for (int a = 0; a < 2; ++a) {
    const GMatrix& G = g.gammas[a];
    const GMatrix& V = a == 0 ? v1 : v2;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        std::vector<Gauss> row(4);
        for (int k = 0; k < 2; ++k) {
          row[i * 2 + k] += G(k, j);
          row[k * 2 + j] -= V(i, k);
        }
        rows.push_back(row);
      }
  }
  auto ns = nullspace(rows, 4);
  REQUIRE(ns.size() == 1);
  Gauss det = ns[0][0] * ns[0][3] - ns[0][1] * ns[0][2];
  CHECK_FALSE(det.is_zero());
}

TEST_CASE("chirality") {
  for (int p : {2, 4, 6}) {
    auto g = build_gammas({p, 0});
    auto w = chirality(g);
    CHECK((w * w) == GMatrix::identity(g.dim));
    for (const auto& x : g.gammas) CHECK(anticommutator(w, x).is_zero());
    CHECK(w.trace().is_zero());
  }
  for (int p : {1, 3, 5, 7}) {
    auto g = build_gammas({p, 0});
    auto w = chirality(g);
    for (const auto& x : g.gammas) CHECK(commutator(w, x).is_zero());
    bool scalar = w == GMatrix::identity(g.dim) || w == -GMatrix::identity(g.dim);
    CHECK(scalar);
  }
  CHECK_THROWS(chirality(build_gammas({1, 1})));
}

TEST_CASE("real structure signs follow the mod 8 table") {
  // p:        1   2   3   4   5   6   7   8
  const int eps[] = {1, -1, -1, -1, -1, 1, 1, 1};
  const int epsp[] = {-1, 1, 1, 1, -1, 1, 1, 1};
  const int epspp[] = {0, -1, 0, 1, 0, -1, 0, 1};
  auto t0 = std::chrono::steady_clock::now();
  for (int p = 1; p <= 8; ++p) {
    CAPTURE(p);
    auto rs = find_real_structure(p);
    CHECK(rs.eps == eps[p - 1]);
    CHECK(rs.eps_prime == epsp[p - 1]);
    if (p % 2 == 0) {
      REQUIRE(rs.eps_double_prime);
      CHECK(*rs.eps_double_prime == epspp[p - 1]);
    } else {
      CHECK_FALSE(rs.eps_double_prime);
    }
    auto g = build_gammas({p, 0});
    CHECK((rs.C * rs.C.conj()) == GMatrix::identity(g.dim) * Gauss(rs.eps));
    for (const auto& x : g.gammas) CHECK((rs.C * x.conj()) == (x * rs.C * Gauss(rs.eps_prime)));
    CHECK((rs.C * rs.C.adjoint()) == GMatrix::identity(g.dim));
    auto ref = reference_real_signs(p);
    CHECK(ref.eps == rs.eps);
    CHECK(ref.eps_prime == rs.eps_prime);
    CHECK(ref.eps_double_prime == rs.eps_double_prime);
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 1.0);
  CHECK_THROWS(find_real_structure(0));
}

TEST_CASE("basic word traces") {
  for (int p : {2, 3, 4}) {
    TensorCtx ctx;
    ctx.dim = p;
    long d = spinor_dim(p);
    CHECK(gamma_word_trace({}, p) == Expr(Gauss(d)));
    CHECK(gamma_word_trace({1}, p).is_zero());
    Expr ab = Expr::mono(Gauss(-d), Mono{0, {fac(Sym::DELTA, {1, 2})}}, ctx);
    CHECK(gamma_word_trace({1, 2}, p) == ab);
    CHECK(gamma_word_trace({1, 1}, p) == Expr(Gauss(-d * p)));
  }
  // odd p: the top-degree word has a nonzero trace
  CHECK_FALSE(gamma_word_trace({1, 2, 3}, 3).is_zero());
  CHECK(gamma_word_trace({1, 2, 3}, 4).is_zero());
  CHECK_THROWS(gamma_word_trace(std::vector<int>(9, 1), 4));
}

TEST_CASE("word traces agree with matrix traces") {
  for (int p : {2, 3, 4}) {
    auto gs = build_gammas({p, 0});
    std::vector<Eigen::MatrixXcd> g;
    for (const auto& x : gs.gammas) g.push_back(oracle::to_eigen(x));
    for (int k = 0; k <= 6; ++k) {
      std::vector<std::vector<int>> pats;
      std::vector<int> cur;
      oracle::patterns(k, cur, &pats);
      for (const auto& w : pats) {
        CAPTURE(p);
        CAPTURE(k);
        Expr sym = gamma_word_trace(w, p);
        std::vector<int> free;
        for (int l : w)
          if (std::count(w.begin(), w.end(), l) == 1) free.push_back(l);
        std::vector<int> v(free.size(), 0);
        while (true) {
          std::map<int, int> fixed;
          for (std::size_t q = 0; q < free.size(); ++q) fixed[free[q]] = v[q];
          oracle::cd num = oracle::numeric_pattern(g, w, fixed, p);
          oracle::cd s = oracle::eval_delta_eps(sym, p, fixed);
          CHECK(std::abs(num - s) < 1e-9);
          std::size_t q = 0;
          while (q < v.size() && ++v[q] == p) v[q++] = 0;
          if (q == v.size()) break;
        }
      }
    }
  }
}

TEST_CASE("torsion trace identities") {
  // T_m = 1/2 t_{mab} gamma^a gamma^b, gamma^{mn} = gamma^{[mn]}
  for (int p : {3, 4, 5, 6}) {
    TensorCtx ctx;
    ctx.dim = p;
    auto T = [&](int m, int a, int b) {
      Expr g = gamma_mul(Expr::mono(Gauss(1), Mono{0, {fac(Sym::GAM, {a})}}, ctx),
                         Expr::mono(Gauss(1), Mono{0, {fac(Sym::GAM, {b})}}, ctx), ctx);
      return gamma_mul(Expr::mono(Gauss(rational(1, 2)), Mono{0, {fac(Sym::T, {m, a, b})}}, ctx), g, ctx);
    };
    Expr t2 = Expr::mono(Gauss(1), Mono{0, {fac(Sym::T, {1, 2, 3}), fac(Sym::T, {1, 2, 3})}}, ctx);
    Gauss d(spinor_dim(p));
    Expr tt = gamma_mul(T(1, 2, 3), T(1, 4, 5), ctx);
    CHECK(spinor_trace(tt, p) == t2 * (d * Gauss(rational(-1, 2))));
    Expr gmn = Expr::mono(Gauss(rational(1, 2)), Mono{0, {fac(Sym::GAM, {6, 7})}}, ctx);
    Expr comm = gamma_mul(T(6, 2, 3), T(7, 4, 5), ctx) - gamma_mul(T(7, 4, 5), T(6, 2, 3), ctx);
    CHECK(spinor_trace(gamma_mul(gmn, comm, ctx), p) == t2 * (-d));
  }
}

}
