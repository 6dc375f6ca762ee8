#include "spectre/tensor.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace spectre {

namespace {

enum class Kind { Trivial, Symmetric, Antisymmetric, Group };

Kind kind_of(Sym s) {
  switch (s) {
    case Sym::DELTA:
    case Sym::DX:
    case Sym::B:
    case Sym::XI:
      return Kind::Symmetric;
    case Sym::GAM:
    case Sym::EPS:
    case Sym::T:
      return Kind::Antisymmetric;
    case Sym::RSC:
    case Sym::TSQ:
    case Sym::BND:
      return Kind::Trivial;
    default:
      return Kind::Group;
  }
}

struct Perm {
  std::vector<int> p;
  int sign;
};

using Group = std::vector<Perm>;

std::vector<int> compose_perm(const std::vector<int>& a, const std::vector<int>& b) {
  // (a*b)[k] = a[b[k]]
  std::vector<int> r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[b[k]];
  return r;
}

Group closure(std::size_t n, const std::vector<Perm>& gens) {
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::map<std::vector<int>, int> seen{{id, 1}};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        auto y = compose_perm(x, g.p);
        int s = seen[x] * g.sign;
        auto it = seen.find(y);
        if (it == seen.end()) {
          seen[y] = s;
          next.push_back(y);
        } else if (it->second != s) {
          throw std::logic_error("symmetry group is sign-inconsistent");
        }
      }
    frontier = std::move(next);
  }
  Group out;
  for (auto& [p, s] : seen) out.push_back({p, s});
  return out;
}

Perm transposition(std::size_t n, int i, int j, int sign) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::swap(p[i], p[j]);
  return {p, sign};
}

// Symmetric group on slots [lo, n).
void add_symmetric_gens(std::vector<Perm>& gens, std::size_t n, int lo, int sign) {
  for (int k = lo; k + 1 < static_cast<int>(n); ++k) gens.push_back(transposition(n, k, k + 1, sign));
}

const Group& group_for(Sym s, std::size_t n, RMode mode) {
  static std::mutex mu;
  static std::map<std::tuple<int, std::size_t, int>, Group> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(static_cast<int>(s), n, static_cast<int>(mode));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Perm> gens;
  switch (s) {
    case Sym::R: {
      if (n != 4) throw std::invalid_argument("R needs four slots");
      gens.push_back({{1, 0, 3, 2}, 1});
      if (mode == RMode::Full) {
        gens.push_back(transposition(4, 0, 2, -1));
        gens.push_back(transposition(4, 1, 3, -1));
      }
      break;
    }
    case Sym::T1:
      for (int k = 0; k < 2; ++k) gens.push_back(transposition(n, k, k + 1, -1));
      break;
    case Sym::OM:
    case Sym::OM1:
      gens.push_back(transposition(n, 1, 2, -1));
      break;
    case Sym::G:
      gens.push_back(transposition(n, 0, 1, 1));
      add_symmetric_gens(gens, n, 2, 1);
      break;
    case Sym::A:
      add_symmetric_gens(gens, n, 1, 1);
      break;
    default:
      break;
  }
  return cache[key] = closure(n, gens);
}

bool is_free_label(int l, const std::unordered_map<int, int>& count) { return count.at(l) == 1; }

struct Arrangement {
  std::vector<int> enc;        // canonical labels
  std::vector<int> new_dummies;  // original labels assigned in this step, in order
  int sign;
};

class Canon {
 public:
  Canon(std::vector<Factor> factors, const TensorCtx& ctx) : f_(std::move(factors)), ctx_(ctx) {
    for (const auto& x : f_)
      for (int l : x.idx) ++count_[l];
    // Processing order: by symbol, larger arity first.
    order_.resize(f_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      if (f_[a].sym != f_[b].sym) return f_[a].sym < f_[b].sym;
      return f_[a].idx.size() > f_[b].idx.size();
    });
    // Positions grouped by (sym, arity); factors in a group are interchangeable.
    for (std::size_t k = 0; k < order_.size(); ++k) {
      const auto& x = f_[order_[k]];
      if (k == 0 || x.sym != f_[order_[k - 1]].sym || x.idx.size() != f_[order_[k - 1]].idx.size())
        groups_.emplace_back();
      groups_.back().push_back(order_[k]);
      pos_group_.push_back(static_cast<int>(groups_.size()) - 1);
    }
    used_.assign(f_.size(), false);
    cur_.resize(f_.size());
    cur_fac_.resize(f_.size());
  }

  // Returns false if zero.
  bool run(int* sign, std::vector<Factor>* out) {
    dfs(0, 1);
    if (!have_best_) return false;
    if (signs_.size() > 1) return false;
    *sign = *signs_.begin();
    out->clear();
    for (std::size_t k = 0; k < best_.size(); ++k) out->push_back({best_sym_[k], best_[k]});
    return true;
  }

 private:
  int map_label(int l) const {
    auto it = map_.find(l);
    return it == map_.end() ? -1 : it->second;
  }

  // Compare cur_[0..depth] with best_[0..depth]: -1, 0, 1.
  int compare_prefix(std::size_t depth) const {
    for (std::size_t k = 0; k <= depth; ++k) {
      if (cur_[k] < best_[k]) return -1;
      if (best_[k] < cur_[k]) return 1;
    }
    return 0;
  }

  void enumerate(const Factor& x, std::vector<Arrangement>* out) {
    Kind kd = kind_of(x.sym);
    auto encode = [&](const std::vector<int>& arranged, int sign) {
      Arrangement a;
      a.sign = sign;
      int next = next_;
      std::vector<std::pair<int, int>> local;
      for (int l : arranged) {
        if (is_free_label(l, count_)) {
          a.enc.push_back(l);
          continue;
        }
        int m = map_label(l);
        if (m < 0) {
          for (auto& [ol, nl] : local)
            if (ol == l) m = nl;
        }
        if (m < 0) {
          m = next++;
          local.emplace_back(l, m);
          a.new_dummies.push_back(l);
        }
        a.enc.push_back(m);
      }
      out->push_back(std::move(a));
    };
    if (kd == Kind::Trivial || x.idx.size() <= 1) {
      encode(x.idx, 1);
      return;
    }
    if (kd == Kind::Group) {
      for (const auto& g : group_for(x.sym, x.idx.size(), ctx_.rmode)) {
        std::vector<int> arr(x.idx.size());
        for (std::size_t k = 0; k < arr.size(); ++k) arr[k] = x.idx[g.p[k]];
        encode(arr, g.sign);
      }
      return;
    }
    // Fully (anti)symmetric: assigned labels sorted, unassigned ones permuted.
    std::vector<std::pair<int, int>> assigned;  // (mapped value, slot)
    std::vector<int> unassigned;               // slots
    for (std::size_t k = 0; k < x.idx.size(); ++k) {
      int l = x.idx[k];
      int m = is_free_label(l, count_) ? l : map_label(l);
      if (m >= 0)
        assigned.emplace_back(m, static_cast<int>(k));
      else
        unassigned.push_back(static_cast<int>(k));
    }
    std::sort(assigned.begin(), assigned.end());
    // Unassigned labels that repeat within this factor are grouped together.
    std::sort(unassigned.begin(), unassigned.end());
    do {
      std::vector<int> slots;
      for (auto& a : assigned) slots.push_back(a.second);
      for (int s : unassigned) slots.push_back(s);
      int sign = 1;
      if (kd == Kind::Antisymmetric) {
        std::vector<int> p = slots;
        for (std::size_t i = 0; i < p.size(); ++i)
          while (p[i] != static_cast<int>(i)) {
            std::swap(p[i], p[p[i]]);
            sign = -sign;
          }
      }
      std::vector<int> arr;
      for (int s : slots) arr.push_back(x.idx[s]);
      encode(arr, sign);
    } while (std::next_permutation(unassigned.begin(), unassigned.end()));
  }

  void dfs(std::size_t depth, int sign) {
    if (depth == f_.size()) {
      int cmp = !have_best_ ? -1 : (depth == 0 ? 0 : compare_prefix(depth - 1));
      if (cmp < 0) {
        best_ = cur_;
        best_sym_.clear();
        for (int fi : cur_fac_) best_sym_.push_back(f_[fi].sym);
        signs_.clear();
        have_best_ = true;
      }
      if (cmp <= 0) signs_.insert(sign);
      return;
    }
    int g = pos_group_[depth];
    for (int fi : groups_[g]) {
      if (used_[fi]) continue;
      std::vector<Arrangement> arrs;
      enumerate(f_[fi], &arrs);
      used_[fi] = true;
      for (auto& a : arrs) {
        cur_[depth] = a.enc;
        cur_fac_[depth] = fi;
        if (have_best_ && compare_prefix(depth) > 0) continue;
        int saved_next = next_;
        for (std::size_t k = 0; k < a.new_dummies.size(); ++k) map_[a.new_dummies[k]] = next_++;
        dfs(depth + 1, sign * a.sign);
        for (int l : a.new_dummies) map_.erase(l);
        next_ = saved_next;
      }
      used_[fi] = false;
    }
  }

  std::vector<Factor> f_;
  TensorCtx ctx_;
  std::unordered_map<int, int> count_;
  std::vector<int> order_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> pos_group_;
  std::vector<bool> used_;
  std::unordered_map<int, int> map_;
  int next_ = kDummyBase;
  std::vector<std::vector<int>> cur_;
  std::vector<int> cur_fac_;
  std::vector<std::vector<int>> best_;
  std::vector<Sym> best_sym_;
  bool have_best_ = false;
  std::set<int> signs_;
};

}  // namespace

Factor fac(Sym s, std::vector<int> idx) { return Factor{s, std::move(idx)}; }

int Mono::xi_count() const {
  int n = 0;
  for (const auto& x : f)
    if (x.sym == Sym::XI) ++n;
  return n;
}

int Mono::max_label() const {
  int m = 0;
  for (const auto& x : f)
    for (int l : x.idx) m = std::max(m, l);
  return m;
}

std::vector<int> Mono::free_indices() const {
  std::map<int, int> c;
  for (const auto& x : f)
    for (int l : x.idx) ++c[l];
  std::vector<int> out;
  for (auto& [l, n] : c)
    if (n == 1) out.push_back(l);
  return out;
}

bool Mono::has(Sym s) const {
  for (const auto& x : f)
    if (x.sym == s) return true;
  return false;
}

std::optional<std::pair<Gauss, Mono>> canonicalize(const Mono& in, const TensorCtx& ctx) {
  Gauss mult(1);
  Mono m = in;
  std::unordered_map<int, int> count;
  for (const auto& x : m.f)
    for (int l : x.idx) {
      if (++count[l] > 2) throw std::invalid_argument("index " + std::to_string(l) + " used more than twice");
    }
  for (auto& [l, n] : count)
    if (n == 1 && l >= kDummyBase) throw std::invalid_argument("free index label out of range: " + std::to_string(l));

  // Contract Kronecker deltas.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < m.f.size() && !changed; ++k) {
      if (m.f[k].sym != Sym::DELTA) continue;
      int i = m.f[k].idx[0], j = m.f[k].idx[1];
      if (i == j) {
        if (!ctx.dim) throw std::logic_error("trace of delta requires a dimension");
        mult *= Gauss(*ctx.dim);
        m.f.erase(m.f.begin() + static_cast<long>(k));
        changed = true;
        break;
      }
      for (int side = 0; side < 2 && !changed; ++side) {
        int from = side == 0 ? i : j;
        int to = side == 0 ? j : i;
        for (std::size_t q = 0; q < m.f.size() && !changed; ++q) {
          if (q == k) continue;
          for (auto& l : m.f[q].idx)
            if (l == from) {
              l = to;
              changed = true;
              break;
            }
        }
      }
      if (changed) m.f.erase(m.f.begin() + static_cast<long>(k));
    }
  }

  // Fold xi.xi and g.xi.xi into sigma_2.
  changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < m.f.size() && !changed; ++a) {
      if (!ctx.flat || m.f[a].sym != Sym::XI) continue;
      for (std::size_t b = a + 1; b < m.f.size() && !changed; ++b)
        if (m.f[b].sym == Sym::XI && m.f[b].idx[0] == m.f[a].idx[0]) {
          m.f.erase(m.f.begin() + static_cast<long>(b));
          m.f.erase(m.f.begin() + static_cast<long>(a));
          m.h += 2;
          changed = true;
        }
    }
    for (std::size_t g = 0; g < m.f.size() && !changed; ++g) {
      if (m.f[g].sym != Sym::G || m.f[g].idx.size() != 2) continue;
      int i = m.f[g].idx[0], j = m.f[g].idx[1];
      if (i == j) continue;
      int xa = -1, xb = -1;
      for (std::size_t q = 0; q < m.f.size(); ++q) {
        if (m.f[q].sym != Sym::XI) continue;
        if (m.f[q].idx[0] == i && xa < 0) xa = static_cast<int>(q);
        else if (m.f[q].idx[0] == j && xb < 0) xb = static_cast<int>(q);
      }
      if (xa >= 0 && xb >= 0) {
        std::vector<std::size_t> del{g, static_cast<std::size_t>(xa), static_cast<std::size_t>(xb)};
        std::sort(del.rbegin(), del.rend());
        for (auto d : del) m.f.erase(m.f.begin() + static_cast<long>(d));
        m.h += 2;
        changed = true;
      }
    }
  }

  // Repeated label inside an antisymmetric factor.
  for (const auto& x : m.f) {
    if (kind_of(x.sym) != Kind::Antisymmetric) continue;
    std::set<int> s(x.idx.begin(), x.idx.end());
    if (s.size() != x.idx.size()) return std::nullopt;
  }

  Canon c(m.f, ctx);
  int sign = 1;
  Mono out;
  out.h = m.h;
  if (!c.run(&sign, &out.f)) return std::nullopt;
  return std::make_pair(mult * Gauss(sign), out);
}

Mono shift_dummies(const Mono& m, int base) {
  std::map<int, int> c;
  for (const auto& x : m.f)
    for (int l : x.idx) ++c[l];
  std::map<int, int> ren;
  int next = base;
  Mono out = m;
  for (auto& x : out.f)
    for (auto& l : x.idx)
      if (c[l] == 2) {
        auto it = ren.find(l);
        if (it == ren.end()) it = ren.emplace(l, next++).first;
        l = it->second;
      }
  return out;
}

Expr::Expr(const Gauss& c) {
  if (!c.is_zero()) t_[Mono{}] = c;
}

Expr Expr::mono(const Gauss& c, Mono m, const TensorCtx& ctx) {
  Expr e;
  e.add(c, m, ctx);
  return e;
}

void Expr::add_canonical(const Gauss& c, const Mono& m) {
  if (c.is_zero()) return;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) t_.erase(it);
}

void Expr::add(const Gauss& c, const Mono& m, const TensorCtx& ctx) {
  if (c.is_zero()) return;
  auto r = canonicalize(m, ctx);
  if (!r) return;
  add_canonical(c * r->first, r->second);
}

Expr& Expr::operator+=(const Expr& o) {
  for (const auto& [m, c] : o.t_) add_canonical(c, m);
  return *this;
}

Expr& Expr::operator-=(const Expr& o) {
  for (const auto& [m, c] : o.t_) add_canonical(-c, m);
  return *this;
}

Expr Expr::operator+(const Expr& o) const {
  Expr r = *this;
  r += o;
  return r;
}

Expr Expr::operator-(const Expr& o) const {
  Expr r = *this;
  r -= o;
  return r;
}

Expr Expr::operator*(const Gauss& s) const {
  Expr r;
  if (s.is_zero()) return r;
  for (const auto& [m, c] : t_) r.t_.emplace(m, c * s);
  return r;
}

Expr Expr::mul(const Expr& o, const TensorCtx& ctx) const {
  Expr r;
  for (const auto& [ma, ca] : t_)
    for (const auto& [mb, cb] : o.t_) {
      Mono a = shift_dummies(ma, kFreshBase);
      Mono b = shift_dummies(mb, kFreshBase + 500);
      Mono p;
      p.h = a.h + b.h;
      p.f = a.f;
      p.f.insert(p.f.end(), b.f.begin(), b.f.end());
      r.add(ca * cb, p, ctx);
    }
  return r;
}

Expr Expr::recanonicalize(const TensorCtx& ctx) const {
  Expr r;
  for (const auto& [m, c] : t_) r.add(c, m, ctx);
  return r;
}

Expr Expr::component(int degree) const {
  Expr r;
  for (const auto& [m, c] : t_)
    if (m.degree() == degree) r.t_.emplace(m, c);
  return r;
}

Expr Expr::truncate_below(int cutoff) const {
  Expr r;
  for (const auto& [m, c] : t_)
    if (m.degree() >= cutoff) r.t_.emplace(m, c);
  return r;
}

std::vector<int> Expr::degrees() const {
  std::set<int> s;
  for (const auto& [m, c] : t_) s.insert(m.degree());
  return {s.rbegin(), s.rend()};
}

Gauss Expr::coeff_of(const Mono& canonical) const {
  auto it = t_.find(canonical);
  return it == t_.end() ? Gauss() : it->second;
}

std::string sym_name(Sym s) {
  switch (s) {
    case Sym::R: return "R";
    case Sym::T1: return "dt";
    case Sym::T: return "t";
    case Sym::OM1: return "dw";
    case Sym::OM: return "w";
    case Sym::G: return "g";
    case Sym::A: return "a";
    case Sym::B: return "b";
    case Sym::DX: return "d";
    case Sym::GAM: return "gamma";
    case Sym::EPS: return "eps";
    case Sym::DELTA: return "delta";
    case Sym::XI: return "xi";
    case Sym::RSC: return "Rscalar";
    case Sym::TSQ: return "tsq";
    case Sym::BND: return "boundary";
  }
  return "?";
}

namespace {

std::string label_str(int l) {
  if (l >= kDummyBase) return "d" + std::to_string(l - kDummyBase);
  return "i" + std::to_string(l);
}

}  // namespace

std::string mono_str(const Mono& m) {
  std::ostringstream os;
  bool first = true;
  if (m.h != 0) {
    os << "s2^(" << (m.h % 2 == 0 ? std::to_string(m.h / 2) : std::to_string(m.h) + "/2") << ")";
    first = false;
  }
  for (const auto& x : m.f) {
    if (!first) os << "*";
    first = false;
    os << sym_name(x.sym);
    if (x.sym == Sym::G || x.sym == Sym::A || x.sym == Sym::B) {
      std::size_t lead = x.sym == Sym::G ? 2 : (x.sym == Sym::A ? 1 : 0);
      if (x.idx.size() > lead) os << x.idx.size() - lead;
    }
    if (!x.idx.empty()) {
      os << "[";
      for (std::size_t k = 0; k < x.idx.size(); ++k) os << (k ? "," : "") << label_str(x.idx[k]);
      os << "]";
    }
  }
  if (first) os << "1";
  return os.str();
}

std::string Expr::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : t_) {
    if (!first) os << " + ";
    first = false;
    if (m.h == 0 && m.f.empty())
      os << c.str();
    else if (c == Gauss(1))
      os << mono_str(m);
    else if (c == Gauss(-1))
      os << "-" << mono_str(m);
    else
      os << "(" << c.str() << ")*" << mono_str(m);
  }
  return os.str();
}

}  // namespace spectre
