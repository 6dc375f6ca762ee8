#include "spectre/exact.hpp"

#include <sstream>

namespace spectre {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

Rational rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Gauss& Gauss::operator+=(const Gauss& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Gauss& Gauss::operator-=(const Gauss& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Gauss& Gauss::operator*=(const Gauss& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  Rational r = re_ * o.re_ - im_ * o.im_;
  Rational i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

Gauss& Gauss::operator/=(const Gauss& o) {
  if (o.is_zero()) throw std::domain_error("Gauss: division by zero");
  Rational n = o.norm2();
  Gauss num = *this * o.conj();
  re_ = num.re_ / n;
  im_ = num.im_ / n;
  return *this;
}

std::string Gauss::str() const {
  if (sgn(im_) == 0) return to_string(re_);
  std::ostringstream os;
  if (sgn(re_) != 0) {
    os << to_string(re_);
    os << (sgn(im_) > 0 ? "+" : "-");
    Rational a = abs(im_);
    if (a != 1) os << to_string(a) << "*";
    os << "i";
    return os.str();
  }
  if (im_ == 1) return "i";
  if (im_ == -1) return "-i";
  os << to_string(im_) << "*i";
  return os.str();
}

Gauss i_pow(int k) {
  int m = ((k % 4) + 4) % 4;
  switch (m) {
    case 0: return Gauss(1);
    case 1: return Gauss(0, 1);
    case 2: return Gauss(-1);
    default: return Gauss(0, -1);
  }
}

GMatrix GMatrix::identity(std::size_t n) {
  GMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Gauss(1);
  return m;
}

GMatrix GMatrix::operator*(const GMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("GMatrix: shape mismatch in product");
  GMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Gauss& x = (*this)(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const Gauss& y = o(k, j);
        if (y.is_zero()) continue;
        r(i, j) += x * y;
      }
    }
  return r;
}

GMatrix GMatrix::operator+(const GMatrix& o) const {
  GMatrix r = *this;
  r += o;
  return r;
}

GMatrix& GMatrix::operator+=(const GMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("GMatrix: shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i)
    if (!o.a_[i].is_zero()) a_[i] += o.a_[i];
  return *this;
}

GMatrix GMatrix::operator-(const GMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("GMatrix: shape mismatch");
  GMatrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i)
    if (!o.a_[i].is_zero()) r.a_[i] -= o.a_[i];
  return r;
}

GMatrix GMatrix::operator*(const Gauss& s) const {
  GMatrix r = *this;
  for (auto& x : r.a_)
    if (!x.is_zero()) x *= s;
  return r;
}

bool GMatrix::operator==(const GMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

GMatrix GMatrix::conj() const {
  GMatrix r = *this;
  for (auto& x : r.a_) x = x.conj();
  return r;
}

GMatrix GMatrix::adjoint() const {
  GMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).is_zero()) r(j, i) = (*this)(i, j).conj();
  return r;
}

GMatrix GMatrix::kron(const GMatrix& o) const {
  GMatrix r(rows_ * o.rows_, cols_ * o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const Gauss& x = (*this)(i, j);
      if (x.is_zero()) continue;
      for (std::size_t k = 0; k < o.rows_; ++k)
        for (std::size_t l = 0; l < o.cols_; ++l) r(i * o.rows_ + k, j * o.cols_ + l) = x * o(k, l);
    }
  return r;
}

Gauss GMatrix::trace() const {
  Gauss t;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool GMatrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

GMatrix GMatrix::block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
  GMatrix r(r1 - r0, c1 - c0);
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = c0; j < c1; ++j) r(i - r0, j - c0) = (*this)(i, j);
  return r;
}

GMatrix commutator(const GMatrix& a, const GMatrix& b) { return a * b - b * a; }
GMatrix anticommutator(const GMatrix& a, const GMatrix& b) { return a * b + b * a; }

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(std::vector<std::vector<Gauss>>& m, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col].is_zero()) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    Gauss inv = Gauss(1) / m[row][col];
    for (std::size_t j = col; j < ncols; ++j) m[row][j] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      Gauss f = m[r][col];
      for (std::size_t j = col; j < ncols; ++j)
        if (!m[row][j].is_zero()) m[r][j] -= f * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::vector<std::vector<Gauss>> nullspace(std::vector<std::vector<Gauss>> rows, std::size_t ncols) {
  auto pivots = rref(rows, ncols);
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Gauss>> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Gauss> v(ncols);
    v[f] = Gauss(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(std::vector<std::vector<Gauss>> rows) {
  if (rows.empty()) return 0;
  std::size_t n = rows.front().size();
  return rref(rows, n).size();
}

bool solve_in_span(const std::vector<std::vector<Gauss>>& basis, const std::vector<Gauss>& target,
                   std::vector<Gauss>* coeffs) {
  // Columns are basis vectors; augmented with the target.
  std::size_t k = basis.size();
  std::size_t n = target.size();
  std::vector<std::vector<Gauss>> m(n, std::vector<Gauss>(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = basis[j][i];
    m[i][k] = target[i];
  }
  auto pivots = rref(m, k + 1);
  if (!pivots.empty() && pivots.back() == k) return false;
  if (coeffs) {
    coeffs->assign(k, Gauss());
    for (std::size_t r = 0; r < pivots.size(); ++r) (*coeffs)[pivots[r]] = m[r][k];
  }
  return true;
}

}  // namespace spectre
