#pragma once

// Universal differential algebra and Hochschild complex over finite
// commutative model algebras represented by matrices.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "spectre/exact.hpp"

namespace spectre {

// Linear combination of algebra basis keys.
using AlgElem = std::map<int, Gauss>;

class ModelAlgebra {
 public:
  // Truncated circle: basis e_n, n = -size/2 .. size/2 - 1, D = diag(n), u = lower shift,
  // keys k stand for u^k. Identities are checked on rows [margin, size - margin).
  static ModelAlgebra circle(int size, int margin, int max_power = 2);

  // C^m with basis {1, e_1, ..., e_{m-1}} acting diagonally; D given.
  static ModelAlgebra diagonal(int m, const GMatrix& D);

  const std::string& name() const { return name_; }
  int unit() const { return unit_; }
  const std::vector<int>& keys() const { return keys_; }

  AlgElem mul(int a, int b) const;
  int star(int key) const;
  const GMatrix& rep(int key) const;
  const GMatrix& drep(int key) const;  // [D, pi(key)]
  const GMatrix& D() const { return D_; }
  int reach(int key) const;
  std::size_t size() const { return D_.rows(); }
  std::size_t window_lo() const { return lo_; }
  std::size_t window_hi() const { return hi_; }
  // Largest total reach a represented monomial may have.
  int margin() const { return static_cast<int>(lo_); }

  // Rows of m restricted to the window, all columns.
  GMatrix on_window(const GMatrix& m) const;
  bool equal_on_window(const GMatrix& a, const GMatrix& b) const;

  // [[D, pi(a)], pi(b)] = 0 on the window for all basis pairs.
  bool first_order_holds() const;

 private:
  enum class Kind { Circle, Diagonal };
  Kind kind_ = Kind::Circle;
  std::string name_;
  int unit_ = 0;
  int m_ = 0;
  std::vector<int> keys_;
  GMatrix D_;
  std::size_t lo_ = 0, hi_ = 0;
  std::shared_ptr<std::map<int, GMatrix>> rep_, drep_;
};

// a_0 (x) a_1 (x) ... (x) a_n  <->  a_0 da_1 ... da_n, in normalized form.
class Chain {
 public:
  Chain() = default;
  static Chain elem(const std::vector<int>& keys, const Gauss& c = Gauss(1));

  const std::map<std::vector<int>, Gauss>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  // -1 for the zero chain; throws if not homogeneous.
  int degree() const;

  void add(const std::vector<int>& keys, const Gauss& c, const ModelAlgebra& m);

  Chain operator+(const Chain& o) const;
  Chain operator-(const Chain& o) const;
  Chain operator*(const Gauss& s) const;
  bool operator==(const Chain& o) const { return t_ == o.t_; }
  bool operator!=(const Chain& o) const { return !(*this == o); }

  std::string str() const;

 private:
  std::map<std::vector<int>, Gauss> t_;
};

Chain make_chain(const std::vector<std::pair<Gauss, std::vector<int>>>& terms, const ModelAlgebra& m);

Chain hochschild_b(const Chain& c, const ModelAlgebra& m);
Chain delta(const Chain& c, const ModelAlgebra& m);
Chain sigma_op(const Chain& c, const ModelAlgebra& m);
// Product in Omega*(A).
Chain chain_mul(const Chain& x, const Chain& y, const ModelAlgebra& m);
Chain chain_star(const Chain& c, const ModelAlgebra& m);
// Append da to every term (omega |-> omega da).
Chain append_delta(const Chain& c, int a, const ModelAlgebra& m);
Chain left_mul(int a, const Chain& c, const ModelAlgebra& m);
Chain right_mul(const Chain& c, int a, const ModelAlgebra& m);

GMatrix represent(const Chain& c, const ModelAlgebra& m);

struct JunkBasis {
  int degree = 2;
  std::vector<Chain> kernel;    // degree-(n-1) chains with pi = 0 on the window
  std::vector<GMatrix> matrices;  // pi(delta(kernel)), window rows
};

// ker pi computed over all degree-(n-1) monomials built from the model's keys.
JunkBasis junk_basis(const ModelAlgebra& m, int degree = 2);

// Is pi-image (window rows) in the span of the junk matrices?
bool in_junk_span(const JunkBasis& j, const GMatrix& x_on_window);

// (1/M) Tr([D,a]^* [D,b]) over window rows, M = window size.
Gauss omega1_form(const ModelAlgebra& m, const AlgElem& a, const AlgElem& b);

struct IdentityResult {
  std::string model;
  std::string identity;
  int checked = 0;
  int failed = 0;
};

// Randomized identity suite over the truncated circle and diagonal models.
std::vector<IdentityResult> run_identity_suite(std::uint64_t seed, int chains_per_identity);

}  // namespace spectre
