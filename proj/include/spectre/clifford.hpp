#pragma once

#include <optional>
#include <vector>

#include "spectre/exact.hpp"
#include "spectre/tensor.hpp"

namespace spectre {

struct Signature {
  int r = 0;
  int s = 0;
  int p() const { return r + s; }
};

// gamma^a gamma^b + gamma^b gamma^a = -2 eta^{ab}, eta = diag(+1 x r, -1 x s).
struct GammaSet {
  Signature sig;
  std::size_t dim = 0;
  std::vector<GMatrix> gammas;
};

constexpr int kMaxCliffordDim = 12;

GammaSet build_gammas(Signature sig);

// i^floor((p+1)/2) gamma^1 ... gamma^p; Euclidean signature only.
GMatrix chirality(const GammaSet& g);

// J v = C conj(v).
struct RealStructure {
  int p = 0;
  GMatrix C;
  int eps = 0;
  int eps_prime = 0;
  std::optional<int> eps_double_prime;
};

RealStructure find_real_structure(int p);

struct RealSigns {
  int eps;
  int eps_prime;
  std::optional<int> eps_double_prime;
};

// Reference mod 8 table of (eps, eps', eps'').
RealSigns reference_real_signs(int p);

// Spinor dimension 2^floor(p/2).
long spinor_dim(int p);

// tr(gamma^1 ... gamma^p) / dim for odd p in the Euclidean representation; zero for even p.
Gauss top_trace_factor(int p);

// Symbolic Clifford algebra on Expr monomials carrying at most one GAM factor
// (an antisymmetrized gamma product; no GAM factor means the identity).
Expr gamma_left(int a, const Expr& e, const TensorCtx& ctx);
Expr gamma_mul(const Expr& x, const Expr& y, const TensorCtx& ctx);

// Trace over spinors of every GAM factor; ctx.dim must equal p.
Expr spinor_trace(const Expr& e, int p);

// Trace of gamma^{w1} ... gamma^{wk}; labels repeated twice are contracted.
Expr gamma_word_trace(const std::vector<int>& word, int p);

}  // namespace spectre
