#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectre {

using Rational = mpq_class;

std::string to_string(const Rational& q);
Rational rational(long num, long den = 1);

// Gaussian rational: re + i*im with exact rational parts.
class Gauss {
 public:
  Gauss() = default;
  Gauss(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  Gauss(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Gauss i() { return Gauss(0, 1); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  Gauss conj() const { return Gauss(re_, -im_); }
  Rational norm2() const { return re_ * re_ + im_ * im_; }

  Gauss& operator+=(const Gauss& o);
  Gauss& operator-=(const Gauss& o);
  Gauss& operator*=(const Gauss& o);
  Gauss& operator/=(const Gauss& o);

  friend Gauss operator+(Gauss a, const Gauss& b) { return a += b; }
  friend Gauss operator-(Gauss a, const Gauss& b) { return a -= b; }
  friend Gauss operator*(Gauss a, const Gauss& b) { return a *= b; }
  friend Gauss operator/(Gauss a, const Gauss& b) { return a /= b; }
  Gauss operator-() const { return Gauss(-re_, -im_); }

  friend bool operator==(const Gauss& a, const Gauss& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Gauss& a, const Gauss& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string str() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

// i^k for integer k (any sign).
Gauss i_pow(int k);

// Dense exact matrix over Gaussian rationals.
class GMatrix {
 public:
  GMatrix() = default;
  GMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static GMatrix identity(std::size_t n);
  static GMatrix zero(std::size_t r, std::size_t c) { return GMatrix(r, c); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Gauss& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Gauss& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  GMatrix operator*(const GMatrix& o) const;
  GMatrix operator+(const GMatrix& o) const;
  GMatrix operator-(const GMatrix& o) const;
  GMatrix operator*(const Gauss& s) const;
  GMatrix operator-() const { return *this * Gauss(-1); }
  GMatrix& operator+=(const GMatrix& o);

  bool operator==(const GMatrix& o) const;
  bool operator!=(const GMatrix& o) const { return !(*this == o); }

  GMatrix conj() const;
  GMatrix adjoint() const;
  GMatrix kron(const GMatrix& o) const;
  Gauss trace() const;
  bool is_zero() const;

  // Block [r0, r1) x [c0, c1).
  GMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Gauss> a_;
};

GMatrix commutator(const GMatrix& a, const GMatrix& b);
GMatrix anticommutator(const GMatrix& a, const GMatrix& b);

// Nullspace basis of an exact matrix (columns of the returned list solve A x = 0).
std::vector<std::vector<Gauss>> nullspace(std::vector<std::vector<Gauss>> rows, std::size_t ncols);

// Rank of a set of row vectors.
std::size_t rank(std::vector<std::vector<Gauss>> rows);

// Solve for coefficients c with sum_k c_k basis[k] == target; returns false if inconsistent.
bool solve_in_span(const std::vector<std::vector<Gauss>>& basis, const std::vector<Gauss>& target,
                   std::vector<Gauss>* coeffs);

}  // namespace spectre
