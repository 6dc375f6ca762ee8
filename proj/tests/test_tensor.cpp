#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles/tensor_eval.hpp"
#include "spectre/tensor.hpp"

using namespace spectre;

namespace {

struct Slot {
  Sym sym;
  std::size_t arity;
};

// Random monomial with `nfree` free labels (1, 2, ...) and the rest paired.
Mono random_mono(std::mt19937& rng, int nfree, bool with_eps) {
  std::vector<Slot> menu{{Sym::R, 4},  {Sym::T, 3}, {Sym::T1, 4}, {Sym::OM, 3}, {Sym::OM1, 4}, {Sym::G, 3},
                         {Sym::G, 4},  {Sym::A, 1}, {Sym::A, 2},  {Sym::A, 3},  {Sym::B, 0},   {Sym::B, 2},
                         {Sym::XI, 1}, {Sym::XI, 1}, {Sym::DELTA, 2}, {Sym::GAM, 2}, {Sym::G, 2}, {Sym::RSC, 0}};
  if (with_eps) menu.push_back({Sym::EPS, 3});
  std::uniform_int_distribution<std::size_t> pick(0, menu.size() - 1);
  std::uniform_int_distribution<int> nf(1, 3);
  Mono m;
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  int k = nf(rng);
  for (int i = 0; i < k; ++i) {
    auto s = menu[pick(rng)];
    m.f.push_back({s.sym, std::vector<int>(s.arity, 0)});
  }
  for (std::size_t i = 0; i < m.f.size(); ++i)
    for (std::size_t j = 0; j < m.f[i].idx.size(); ++j) slots.emplace_back(i, j);
  while ((slots.size() - nfree) % 2 != 0 || slots.size() < static_cast<std::size_t>(nfree)) {
    m.f.push_back({Sym::XI, {0}});
    slots.emplace_back(m.f.size() - 1, 0);
  }
  std::shuffle(slots.begin(), slots.end(), rng);
  int label = 1;
  std::size_t q = 0;
  for (; q < static_cast<std::size_t>(nfree); ++q) m.f[slots[q].first].idx[slots[q].second] = label++;
  int dummy = 50;
  for (; q + 1 < slots.size(); q += 2) {
    m.f[slots[q].first].idx[slots[q].second] = dummy;
    m.f[slots[q + 1].first].idx[slots[q + 1].second] = dummy;
    ++dummy;
  }
  std::uniform_int_distribution<int> hh(-3, 2);
  m.h = 2 * hh(rng);
  return m;
}

Mono relabel(const Mono& m, std::mt19937& rng) {
  std::map<int, int> c;
  for (const auto& x : m.f)
    for (int l : x.idx) ++c[l];
  std::vector<int> dummies;
  for (auto& [l, n] : c)
    if (n == 2) dummies.push_back(l);
  auto target = dummies;
  for (auto& t : target) t += 300;
  std::shuffle(target.begin(), target.end(), rng);
  std::map<int, int> ren;
  for (std::size_t k = 0; k < dummies.size(); ++k) ren[dummies[k]] = target[k];
  Mono out = m;
  for (auto& x : out.f)
    for (auto& l : x.idx)
      if (ren.count(l)) l = ren[l];
  std::shuffle(out.f.begin(), out.f.end(), rng);
  return out;
}

double coeff_value(const Gauss& g) { return g.re().get_d(); }

}  // namespace

TEST_SUITE("tensor") {

TEST_CASE("xi pair folds into sigma_2") {
  TensorCtx ctx;
  Mono m{0, {fac(Sym::XI, {5}), fac(Sym::XI, {5})}};
  auto c = canonicalize(m, ctx);
  REQUIRE(c);
  CHECK(c->second.h == 2);
  CHECK(c->second.f.empty());
  Mono g{-2, {fac(Sym::G, {5, 6}), fac(Sym::XI, {5}), fac(Sym::XI, {6})}};
  TensorCtx curved;
  curved.flat = false;
  auto cg = canonicalize(g, curved);
  REQUIRE(cg);
  CHECK(cg->second.h == 0);
  CHECK(cg->second.f.empty());
  auto keep = canonicalize(m, curved);
  REQUIRE(keep);
  CHECK(keep->second.h == 0);
  CHECK(keep->second.f.size() == 2);
}

TEST_CASE("riemann symmetry zeros") {
  TensorCtx ctx;
  // antisymmetric pair (s1, s3) against symmetric xi xi
  Mono m{0, {fac(Sym::R, {5, 1, 6, 2}), fac(Sym::XI, {5}), fac(Sym::XI, {6})}};
  CHECK_FALSE(canonicalize(m, ctx));
  TensorCtx formal;
  formal.rmode = RMode::Formal;
  CHECK(canonicalize(m, formal));
  // pair exchange
  Mono a{0, {fac(Sym::R, {1, 2, 3, 4})}};
  Mono b{0, {fac(Sym::R, {2, 1, 4, 3})}};
  auto ca = canonicalize(a, ctx), cb = canonicalize(b, ctx);
  REQUIRE(ca);
  REQUIRE(cb);
  CHECK(ca->second == cb->second);
  CHECK(ca->first == cb->first);
  Mono c{0, {fac(Sym::R, {3, 2, 1, 4})}};
  auto cc = canonicalize(c, ctx);
  REQUIRE(cc);
  CHECK(cc->second == ca->second);
  CHECK(cc->first == -ca->first);
}

TEST_CASE("delta contraction and trace") {
  TensorCtx ctx;
  ctx.dim = 4;
  Mono m{0, {fac(Sym::DELTA, {5, 5})}};
  auto c = canonicalize(m, ctx);
  REQUIRE(c);
  CHECK(c->first == Gauss(4));
  Mono n{0, {fac(Sym::DELTA, {5, 6}), fac(Sym::A, {5}), fac(Sym::XI, {6})}};
  auto cn = canonicalize(n, ctx);
  REQUIRE(cn);
  CHECK(cn->second.f.size() == 2);
  TensorCtx nodim;
  CHECK_THROWS(canonicalize(m, nodim));
}

TEST_CASE("antisymmetric repeat vanishes") {
  TensorCtx ctx;
  Mono m{0, {fac(Sym::T, {5, 5, 1})}};
  CHECK_FALSE(canonicalize(m, ctx));
  Mono g{0, {fac(Sym::GAM, {5, 6}), fac(Sym::B, {5, 6})}};
  CHECK_FALSE(canonicalize(g, ctx));
}

TEST_CASE("bad index use is rejected") {
  TensorCtx ctx;
  Mono m{0, {fac(Sym::A, {5}), fac(Sym::XI, {5}), fac(Sym::B, {5})}};
  CHECK_THROWS(canonicalize(m, ctx));
  Mono f{0, {fac(Sym::A, {1500})}};
  CHECK_THROWS(canonicalize(f, ctx));
}

TEST_CASE("canonical form agrees with numeric evaluation") {
  std::mt19937 rng(7);
  for (RMode mode : {RMode::Full, RMode::Formal}) {
    TensorCtx ctx;
    ctx.rmode = mode;
    ctx.dim = 3;
    oracle::TensorEval ev(3, mode, 11);
    int nonzero = 0;
    for (int trial = 0; trial < 300; ++trial) {
      Mono m = random_mono(rng, trial % 2, true);
      double direct = ev.value(m);
      auto c = canonicalize(m, ctx);
      double canon = c ? coeff_value(c->first) * ev.value(c->second) : 0.0;
      INFO(mono_str(m), " -> ", (c ? c->first.str() + " " + mono_str(c->second) : std::string("0")));
      CHECK(canon == doctest::Approx(direct).epsilon(1e-9));
      if (c) ++nonzero;
    }
    CHECK(nonzero > 100);
  }
}

TEST_CASE("canonicalization is idempotent and relabel invariant") {
  std::mt19937 rng(3);
  TensorCtx ctx;
  ctx.dim = 4;
  for (int trial = 0; trial < 400; ++trial) {
    Mono m = random_mono(rng, trial % 3, false);
    auto c = canonicalize(m, ctx);
    auto r = canonicalize(relabel(m, rng), ctx);
    REQUIRE(c.has_value() == r.has_value());
    if (!c) continue;
    CHECK(c->second == r->second);
    CHECK(c->first == r->first);
    auto again = canonicalize(c->second, ctx);
    REQUIRE(again);
    CHECK(again->first == Gauss(1));
    CHECK(again->second == c->second);
  }
}

TEST_CASE("expression arithmetic") {
  TensorCtx ctx;
  Expr x = Expr::mono(Gauss(1), Mono{-2, {fac(Sym::A, {5}), fac(Sym::XI, {5})}}, ctx);
  Expr y = Expr::mono(Gauss(2), Mono{-2, {fac(Sym::XI, {7}), fac(Sym::A, {7})}}, ctx);
  CHECK((x * Gauss(2)) == y);
  CHECK((y - x - x).is_zero());
  Expr sq = x.mul(x, ctx);
  CHECK(sq.size() == 1);
  CHECK(sq.terms().begin()->first.h == -4);
  CHECK(sq.degrees() == std::vector<int>{-2});
  CHECK(x.component(-1) == x);
  CHECK(x.truncate_below(0).is_zero());
  CHECK(Expr(Gauss(3)).str() == "3");
}

}
