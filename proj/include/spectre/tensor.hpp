#pragma once

// Abstract-index tensor monomials with exact coefficients and a canonical form
// under dummy renaming, factor reordering and per-symbol slot symmetries.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectre/exact.hpp"

namespace spectre {

enum class Sym : std::uint8_t {
  R,      // R^{s1 s2}_{s3 s4}; pairs (s1,s3), (s2,s4)
  T1,     // t_{abc,m}
  T,      // t_{abc}, totally antisymmetric
  OM1,    // w_{m ab, n}
  OM,     // w_{m ab}, antisymmetric in ab
  G,      // metric jet g^{mn}_{,k1..kj}; arity 2 + j
  A,      // a^m_{,k1..kj}; arity 1 + j
  B,      // b_{,k1..kj}; arity j
  DX,     // symmetric product of coordinate derivatives (operator part)
  GAM,    // antisymmetrized gamma product
  EPS,    // Levi-Civita symbol
  DELTA,  // Kronecker delta
  XI,     // covector xi_m
  RSC,    // formal scalar curvature
  TSQ,    // formal t_{abc} t^{abc}
  BND,    // formal boundary term
};

// Symmetry of the Riemann-like symbol.
enum class RMode : std::uint8_t { Full, Formal };

struct TensorCtx {
  std::optional<int> dim;
  RMode rmode = RMode::Full;
  // When false, xi_m xi_m is not folded into sigma_2 (the metric is not flat).
  bool flat = true;
};

constexpr int kDummyBase = 1000;
constexpr int kFreshBase = 2000;

struct Factor {
  Sym sym;
  std::vector<int> idx;

  friend bool operator<(const Factor& a, const Factor& b) {
    if (a.sym != b.sym) return a.sym < b.sym;
    return a.idx < b.idx;
  }
  friend bool operator==(const Factor& a, const Factor& b) { return a.sym == b.sym && a.idx == b.idx; }
};

// A monomial without coefficient. h is twice the exponent of sigma_2.
struct Mono {
  int h = 0;
  std::vector<Factor> f;

  int xi_count() const;
  int degree() const { return xi_count() + h; }
  int max_label() const;
  std::vector<int> free_indices() const;
  bool has(Sym s) const;

  friend bool operator<(const Mono& a, const Mono& b) {
    if (a.h != b.h) return a.h < b.h;
    return a.f < b.f;
  }
  friend bool operator==(const Mono& a, const Mono& b) { return a.h == b.h && a.f == b.f; }
};

Factor fac(Sym s, std::vector<int> idx);

// Canonical form. Returns nullopt when the monomial vanishes by symmetry.
std::optional<std::pair<Gauss, Mono>> canonicalize(const Mono& m, const TensorCtx& ctx);

// Rename dummy labels to fresh values starting at `base`.
Mono shift_dummies(const Mono& m, int base);

class Expr {
 public:
  Expr() = default;
  explicit Expr(const Gauss& c);  // constant

  static Expr mono(const Gauss& c, Mono m, const TensorCtx& ctx);

  const std::map<Mono, Gauss>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }

  // Insert a raw (uncanonical) monomial.
  void add(const Gauss& c, const Mono& m, const TensorCtx& ctx);
  // Insert a monomial already in canonical form.
  void add_canonical(const Gauss& c, const Mono& m);

  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Gauss& s) const;
  Expr operator-() const { return *this * Gauss(-1); }

  Expr mul(const Expr& o, const TensorCtx& ctx) const;
  Expr recanonicalize(const TensorCtx& ctx) const;

  // Terms of a given xi-homogeneity degree.
  Expr component(int degree) const;
  Expr truncate_below(int cutoff) const;
  std::vector<int> degrees() const;

  Gauss coeff_of(const Mono& canonical) const;

  bool operator==(const Expr& o) const { return t_ == o.t_; }
  bool operator!=(const Expr& o) const { return !(*this == o); }

  std::string str() const;

 private:
  std::map<Mono, Gauss> t_;
};

std::string mono_str(const Mono& m);
std::string sym_name(Sym s);

}  // namespace spectre
