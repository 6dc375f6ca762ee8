#include "spectre/univdiff.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace spectre {

ModelAlgebra ModelAlgebra::circle(int size, int margin, int max_power) {
  if (size <= 2 * margin) throw std::invalid_argument("circle model: empty window");
  ModelAlgebra m;
  m.kind_ = Kind::Circle;
  m.name_ = "circle";
  m.unit_ = 0;
  for (int k = -max_power; k <= max_power; ++k) m.keys_.push_back(k);
  m.D_ = GMatrix(size, size);
  for (int i = 0; i < size; ++i) m.D_(i, i) = Gauss(i - size / 2);
  m.lo_ = margin;
  m.hi_ = size - margin;
  m.rep_ = std::make_shared<std::map<int, GMatrix>>();
  m.drep_ = std::make_shared<std::map<int, GMatrix>>();
  return m;
}

ModelAlgebra ModelAlgebra::diagonal(int mdim, const GMatrix& D) {
  if (mdim < 1 || D.rows() != static_cast<std::size_t>(mdim) || D.cols() != D.rows())
    throw std::invalid_argument("diagonal model: D must be m x m");
  ModelAlgebra m;
  m.kind_ = Kind::Diagonal;
  m.name_ = "diagonal";
  m.m_ = mdim;
  m.unit_ = 0;
  for (int k = 0; k < mdim; ++k) m.keys_.push_back(k);
  m.D_ = D;
  m.lo_ = 0;
  m.hi_ = mdim;
  m.rep_ = std::make_shared<std::map<int, GMatrix>>();
  m.drep_ = std::make_shared<std::map<int, GMatrix>>();
  return m;
}

AlgElem ModelAlgebra::mul(int a, int b) const {
  if (kind_ == Kind::Circle) return {{a + b, Gauss(1)}};
  if (a == 0) return {{b, Gauss(1)}};
  if (b == 0 || a == b) return {{a, Gauss(1)}};
  return {};
}

int ModelAlgebra::star(int key) const { return kind_ == Kind::Circle ? -key : key; }

int ModelAlgebra::reach(int key) const { return kind_ == Kind::Circle ? std::abs(key) : 0; }

const GMatrix& ModelAlgebra::rep(int key) const {
  auto it = rep_->find(key);
  if (it != rep_->end()) return it->second;
  std::size_t n = size();
  GMatrix r(n, n);
  if (kind_ == Kind::Circle) {
    // u^k e_j = e_{j+k}
    for (std::size_t j = 0; j < n; ++j) {
      long i = static_cast<long>(j) + key;
      if (i >= 0 && i < static_cast<long>(n)) r(i, j) = Gauss(1);
    }
  } else if (key == 0) {
    r = GMatrix::identity(n);
  } else {
    r(key - 1, key - 1) = Gauss(1);
  }
  return (*rep_)[key] = r;
}

const GMatrix& ModelAlgebra::drep(int key) const {
  auto it = drep_->find(key);
  if (it != drep_->end()) return it->second;
  const GMatrix& a = rep(key);
  return (*drep_)[key] = D_ * a - a * D_;
}

GMatrix ModelAlgebra::on_window(const GMatrix& x) const { return x.block(lo_, hi_, 0, x.cols()); }

bool ModelAlgebra::equal_on_window(const GMatrix& a, const GMatrix& b) const { return on_window(a) == on_window(b); }

bool ModelAlgebra::first_order_holds() const {
  for (int a : keys_)
    for (int b : keys_)
      if (!on_window(commutator(drep(a), rep(b))).is_zero()) return false;
  return true;
}

Chain Chain::elem(const std::vector<int>& keys, const Gauss& c) {
  Chain r;
  if (!c.is_zero()) r.t_[keys] = c;
  return r;
}

int Chain::degree() const {
  if (t_.empty()) return -1;
  int d = static_cast<int>(t_.begin()->first.size()) - 1;
  for (const auto& [k, c] : t_)
    if (static_cast<int>(k.size()) - 1 != d) throw std::logic_error("chain is not homogeneous");
  return d;
}

void Chain::add(const std::vector<int>& keys, const Gauss& c, const ModelAlgebra& m) {
  if (c.is_zero()) return;
  for (std::size_t i = 1; i < keys.size(); ++i)
    if (keys[i] == m.unit()) return;
  auto& slot = t_[keys];
  slot += c;
  if (slot.is_zero()) t_.erase(keys);
}

Chain Chain::operator+(const Chain& o) const {
  Chain r = *this;
  for (const auto& [k, c] : o.t_) {
    auto& slot = r.t_[k];
    slot += c;
    if (slot.is_zero()) r.t_.erase(k);
  }
  return r;
}

Chain Chain::operator-(const Chain& o) const { return *this + o * Gauss(-1); }

Chain Chain::operator*(const Gauss& s) const {
  Chain r;
  if (s.is_zero()) return r;
  for (const auto& [k, c] : t_) r.t_[k] = c * s;
  return r;
}

std::string Chain::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")[";
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
    os << "]";
  }
  return os.str();
}

Chain make_chain(const std::vector<std::pair<Gauss, std::vector<int>>>& terms, const ModelAlgebra& m) {
  Chain r;
  for (const auto& [c, k] : terms) r.add(k, c, m);
  return r;
}

Chain hochschild_b(const Chain& c, const ModelAlgebra& m) {
  if (c.is_zero()) return c;
  if (c.degree() < 1) throw std::invalid_argument("no boundary in degree 0");
  Chain out;
  for (const auto& [k, coef] : c.terms()) {
    std::size_t n = k.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      Gauss s = coef * Gauss(i % 2 == 0 ? 1 : -1);
      for (const auto& [pk, pc] : m.mul(k[i], k[i + 1])) {
        std::vector<int> nk;
        nk.insert(nk.end(), k.begin(), k.begin() + static_cast<long>(i));
        nk.push_back(pk);
        nk.insert(nk.end(), k.begin() + static_cast<long>(i) + 2, k.end());
        out.add(nk, s * pc, m);
      }
    }
    Gauss s = coef * Gauss(n % 2 == 0 ? 1 : -1);
    for (const auto& [pk, pc] : m.mul(k[n], k[0])) {
      std::vector<int> nk{pk};
      nk.insert(nk.end(), k.begin() + 1, k.begin() + static_cast<long>(n));
      out.add(nk, s * pc, m);
    }
  }
  return out;
}

Chain delta(const Chain& c, const ModelAlgebra& m) {
  Chain out;
  for (const auto& [k, coef] : c.terms()) {
    std::vector<int> nk{m.unit()};
    nk.insert(nk.end(), k.begin(), k.end());
    out.add(nk, coef, m);
  }
  return out;
}

Chain append_delta(const Chain& c, int a, const ModelAlgebra& m) {
  Chain out;
  for (const auto& [k, coef] : c.terms()) {
    auto nk = k;
    nk.push_back(a);
    out.add(nk, coef, m);
  }
  return out;
}

Chain left_mul(int a, const Chain& c, const ModelAlgebra& m) {
  Chain out;
  for (const auto& [k, coef] : c.terms())
    for (const auto& [pk, pc] : m.mul(a, k[0])) {
      auto nk = k;
      nk[0] = pk;
      out.add(nk, coef * pc, m);
    }
  return out;
}

// (omega da) b = omega d(ab) - (omega a) db
Chain right_mul(const Chain& c, int b, const ModelAlgebra& m) {
  Chain out;
  for (const auto& [k, coef] : c.terms()) {
    if (k.size() == 1) {
      for (const auto& [pk, pc] : m.mul(k[0], b)) out.add({pk}, coef * pc, m);
      continue;
    }
    int a = k.back();
    Chain omega = Chain::elem(std::vector<int>(k.begin(), k.end() - 1), coef);
    for (const auto& [pk, pc] : m.mul(a, b)) out = out + append_delta(omega, pk, m) * pc;
    out = out - append_delta(right_mul(omega, a, m), b, m);
  }
  return out;
}

Chain chain_mul(const Chain& x, const Chain& y, const ModelAlgebra& m) {
  Chain out;
  for (const auto& [ky, cy] : y.terms()) {
    Chain part = right_mul(x, ky[0], m) * cy;
    for (std::size_t i = 1; i < ky.size(); ++i) part = append_delta(part, ky[i], m);
    out = out + part;
  }
  return out;
}

// sigma(omega da) = (-1)^|omega| (da) omega
Chain sigma_op(const Chain& c, const ModelAlgebra& m) {
  if (c.is_zero() || c.degree() == 0) return c;
  Chain out;
  for (const auto& [k, coef] : c.terms()) {
    int n = static_cast<int>(k.size()) - 1;
    Chain da = Chain::elem({m.unit(), k.back()});
    Chain omega = Chain::elem(std::vector<int>(k.begin(), k.end() - 1), coef);
    Gauss s((n - 1) % 2 == 0 ? 1 : -1);
    out = out + chain_mul(da, omega, m) * s;
  }
  return out;
}

// (a_0 da_1 ... da_n)^* = (-1)^n d(a_n^*) ... d(a_1^*) a_0^*
Chain chain_star(const Chain& c, const ModelAlgebra& m) {
  Chain out;
  for (const auto& [k, coef] : c.terms()) {
    int n = static_cast<int>(k.size()) - 1;
    std::vector<int> nk{m.unit()};
    for (int i = n; i >= 1; --i) nk.push_back(m.star(k[i]));
    Chain head;
    head.add(nk, Gauss(1), m);
    Gauss s = coef.conj() * Gauss(n % 2 == 0 ? 1 : -1);
    out = out + right_mul(head, m.star(k[0]), m) * s;
  }
  return out;
}

GMatrix represent(const Chain& c, const ModelAlgebra& m) {
  std::size_t n = m.size();
  GMatrix out(n, n);
  for (const auto& [k, coef] : c.terms()) {
    int reach = 0;
    for (int key : k) reach += m.reach(key);
    if (reach > m.margin()) throw std::invalid_argument("chain reach exceeds the verification window margin");
    GMatrix x = m.rep(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) x = x * m.drep(k[i]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!x(i, j).is_zero()) out(i, j) += x(i, j) * coef;
  }
  return out;
}

namespace {

std::vector<Gauss> flatten(const GMatrix& x) {
  std::vector<Gauss> v;
  v.reserve(x.rows() * x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) v.push_back(x(i, j));
  return v;
}

void monomials(const ModelAlgebra& m, int degree, std::vector<int>& cur, std::vector<std::vector<int>>* out) {
  if (static_cast<int>(cur.size()) == degree + 1) {
    out->push_back(cur);
    return;
  }
  for (int k : m.keys()) {
    if (!cur.empty() && k == m.unit()) continue;
    cur.push_back(k);
    monomials(m, degree, cur, out);
    cur.pop_back();
  }
}

}  // namespace

JunkBasis junk_basis(const ModelAlgebra& m, int degree) {
  if (degree < 1) throw std::invalid_argument("junk degree must be >= 1");
  JunkBasis j;
  j.degree = degree;
  std::vector<std::vector<int>> monos;
  std::vector<int> cur;
  monomials(m, degree - 1, cur, &monos);
  std::vector<std::vector<Gauss>> cols;
  for (const auto& k : monos) cols.push_back(flatten(m.on_window(represent(Chain::elem(k), m))));
  // rows of the linear map: entry r of pi(sum x_k mono_k) = sum_k cols[k][r] x_k
  std::size_t nr = cols.empty() ? 0 : cols.front().size();
  std::vector<std::vector<Gauss>> rows;
  for (std::size_t r = 0; r < nr; ++r) {
    std::vector<Gauss> row(monos.size());
    bool any = false;
    for (std::size_t k = 0; k < monos.size(); ++k) {
      row[k] = cols[k][r];
      any = any || !row[k].is_zero();
    }
    if (any) rows.push_back(std::move(row));
  }
  auto ns = rows.empty() ? std::vector<std::vector<Gauss>>{} : nullspace(rows, monos.size());
  if (rows.empty())
    for (std::size_t k = 0; k < monos.size(); ++k) {
      std::vector<Gauss> e(monos.size());
      e[k] = Gauss(1);
      ns.push_back(e);
    }
  std::vector<std::vector<Gauss>> kept;
  for (const auto& v : ns) {
    Chain c;
    for (std::size_t k = 0; k < monos.size(); ++k) c.add(monos[k], v[k], m);
    j.kernel.push_back(c);
    GMatrix img = m.on_window(represent(delta(c, m), m));
    auto flat = flatten(img);
    auto trial = kept;
    trial.push_back(flat);
    if (rank(trial) > kept.size()) {
      kept.push_back(flat);
      j.matrices.push_back(img);
    }
  }
  return j;
}

bool in_junk_span(const JunkBasis& j, const GMatrix& x) {
  std::vector<std::vector<Gauss>> basis;
  for (const auto& mtx : j.matrices) basis.push_back(flatten(mtx));
  auto target = flatten(x);
  if (basis.empty()) {
    for (const auto& g : target)
      if (!g.is_zero()) return false;
    return true;
  }
  return solve_in_span(basis, target, nullptr);
}

Gauss omega1_form(const ModelAlgebra& m, const AlgElem& a, const AlgElem& b) {
  std::size_t n = m.size();
  GMatrix da(n, n), db(n, n);
  for (const auto& [k, c] : a) da += m.drep(k) * c;
  for (const auto& [k, c] : b) db += m.drep(k) * c;
  GMatrix prod = da.adjoint() * db;
  Gauss t;
  for (std::size_t i = m.window_lo(); i < m.window_hi(); ++i) t += prod(i, i);
  return t / Gauss(static_cast<long>(m.window_hi() - m.window_lo()));
}

namespace {

class Rand {
 public:
  explicit Rand(std::uint64_t seed) : g_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
  Gauss coeff() {
    int re = 0, im = 0;
    while (re == 0 && im == 0) {
      re = uniform(-3, 3);
      im = uniform(0, 3) == 0 ? uniform(-2, 2) : 0;
    }
    return Gauss(re, im);
  }
  Chain chain(const ModelAlgebra& m, int degree) {
    Chain c;
    int nt = uniform(1, 3);
    const auto& keys = m.keys();
    for (int t = 0; t < nt; ++t) {
      std::vector<int> k;
      for (int i = 0; i <= degree; ++i) k.push_back(keys[uniform(0, static_cast<int>(keys.size()) - 1)]);
      c.add(k, coeff(), m);
    }
    return c;
  }
  int key(const ModelAlgebra& m) { return m.keys()[uniform(0, static_cast<int>(m.keys().size()) - 1)]; }

 private:
  std::mt19937_64 g_;
};

// Hochschild cycles: all 1-chains, boundaries, and antisymmetrized 2-chains.
Chain random_cycle(Rand& r, const ModelAlgebra& m, int which) {
  switch (which % 3) {
    case 0:
      return r.chain(m, 1);
    case 1:
      return hochschild_b(r.chain(m, r.uniform(2, 3)), m);
    default: {
      int a = r.key(m), b = r.key(m), c = r.key(m);
      Gauss s = r.coeff();
      return make_chain({{s, {a, b, c}}, {-s, {a, c, b}}}, m);
    }
  }
}

}  // namespace

std::vector<IdentityResult> run_identity_suite(std::uint64_t seed, int n) {
  std::vector<ModelAlgebra> models;
  models.push_back(ModelAlgebra::circle(40, 12, 2));
  GMatrix D(3, 3);
  D(0, 0) = Gauss(1);
  D(1, 1) = Gauss(-2);
  D(2, 2) = Gauss(5);
  models.push_back(ModelAlgebra::diagonal(3, D));
  std::vector<IdentityResult> out;
  Rand r(seed);
  for (const auto& m : models) {
    const bool first_order = m.first_order_holds();
    auto run = [&](const std::string& id, const std::function<bool(int)>& f) {
      IdentityResult res{m.name(), id, 0, 0};
      for (int i = 0; i < n; ++i) {
        ++res.checked;
        if (!f(i)) ++res.failed;
      }
      out.push_back(res);
    };
    run("b_squared_zero", [&](int i) {
      auto c = r.chain(m, 2 + i % 3);
      return hochschild_b(hochschild_b(c, m), m).is_zero();
    });
    run("delta_squared_zero", [&](int i) { return delta(delta(r.chain(m, i % 4), m), m).is_zero(); });
    run("b_delta_plus_delta_b", [&](int i) {
      auto c = r.chain(m, 1 + i % 3);
      return hochschild_b(delta(c, m), m) + delta(hochschild_b(c, m), m) == c - sigma_op(c, m);
    });
    run("cycle_one_minus_sigma", [&](int i) {
      auto c = random_cycle(r, m, i);
      if (!hochschild_b(c, m).is_zero()) return false;
      return c - sigma_op(c, m) == hochschild_b(delta(c, m), m);
    });
    run("b_of_omega_delta_a", [&](int i) {
      auto w = r.chain(m, i % 3);
      int a = r.key(m);
      Gauss s(i % 3 % 2 == 0 ? 1 : -1);
      Chain comm = right_mul(w, a, m) - left_mul(a, w, m);
      return hochschild_b(append_delta(w, a, m), m) == comm * s;
    });
    run("graded_leibniz", [&](int i) {
      int dw = i % 3, dr = (i / 3) % 3;
      auto w = r.chain(m, dw), rho = r.chain(m, dr);
      Gauss s(dw % 2 == 0 ? 1 : -1);
      return delta(chain_mul(w, rho, m), m) ==
             chain_mul(delta(w, m), rho, m) + chain_mul(w, delta(rho, m), m) * s;
    });
    run("pi_b_zero_on_window", [&](int i) {
      if (!first_order) return false;
      auto c = r.chain(m, 1 + i % 3);
      return m.on_window(represent(hochschild_b(c, m), m)).is_zero();
    });
    run("pi_star_is_adjoint", [&](int i) {
      auto c = r.chain(m, i % 3);
      return m.equal_on_window(represent(chain_star(c, m), m), represent(c, m).adjoint());
    });
  }
  return out;
}

}  // namespace spectre
