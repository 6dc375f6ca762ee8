#include "spectre/model_triples.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <queue>
#include <sstream>

#include "spectre/lp.hpp"
#include "spectre/parallel.hpp"

namespace spectre {

namespace {

Rational factorial(int n) {
  Rational r(1);
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

long double sphere_volume(int p) {
  // Vol(S^{p-1}) = (4 pi)^(p/2) / (2^(p-1) Gamma(p/2))
  long double h = p / 2.0L;
  return std::pow(4 * std::numbers::pi_v<long double>, h) / (std::ldexp(1.0L, p - 1) * std::tgamma(h));
}

}  // namespace

double volume_constant(int p) {
  if (p < 1) throw std::invalid_argument("c(p) requires p >= 1");
  long double h = p / 2.0L;
  return static_cast<double>(std::ldexp(1.0L, p / 2) /
                             (std::pow(4 * std::numbers::pi_v<long double>, h) * std::tgamma(h + 1)));
}

std::string PiMultiple::str() const {
  if (pi_power == 0) return to_string(coeff);
  std::string pw = pi_power == 1 ? "pi" : "pi^" + std::to_string(pi_power);
  Rational num(coeff.get_num()), den(coeff.get_den());
  std::string head = to_string(num) + "/";
  return den == 1 ? head + pw : head + "(" + to_string(den) + "*" + pw + ")";
}

PiMultiple volume_constant_exact(int p) {
  if (p < 1) throw std::invalid_argument("c(p) requires p >= 1");
  int m = p / 2;
  PiMultiple r;
  if (p % 2 == 0) {
    // 1 / (2^m m!) pi^-m
    Rational d = factorial(m);
    for (int k = 0; k < m; ++k) d *= 2;
    r.coeff = Rational(1) / d;
    r.pi_power = m;
  } else {
    // 2^(m+1) (m+1)! / (2m+2)!  pi^-(m+1)
    Rational n = factorial(m + 1);
    for (int k = 0; k <= m; ++k) n *= 2;
    r.coeff = n / factorial(2 * m + 2);
    r.pi_power = m + 1;
  }
  r.coeff.canonicalize();
  return r;
}

VolumeIdentity volume_identity(int p) {
  if (p < 1 || p > 12) throw std::invalid_argument("volume identity needs 1 <= p <= 12");
  VolumeIdentity v;
  long double lhs = std::ldexp(1.0L, p / 2) * sphere_volume(p) /
                    (p * std::pow(2 * std::numbers::pi_v<long double>, static_cast<long double>(p)));
  v.lhs = static_cast<double>(lhs);
  v.rhs = volume_constant(p);
  v.rel_diff = std::fabs(v.lhs - v.rhs) / std::fabs(v.rhs);
  v.equal = v.rel_diff <= 1e-12;
  return v;
}

SingularValueSeq circle_singular_values(const CircleSpec& c) {
  if (c.spin_offset != 0 && c.spin_offset != 0.5) throw std::invalid_argument("circle spin offset must be 0 or 1/2");
  if (!(c.radius > 0)) throw std::invalid_argument("circle radius must be positive");
  double o = c.spin_offset, R = c.radius;
  // |n + o| over n in Z: o = 0 gives 1,1,2,2,...; o = 1/2 gives 1/2,1/2,3/2,3/2,...
  return SingularValueSeq(
      o == 0 ? "circle" : "circle_spin",
      [o, R]() -> SingularValueSeq::Cursor {
        auto j = std::make_shared<std::uint64_t>(0);
        return [o, R, j]() -> std::optional<Run> {
          double lam = o == 0 ? static_cast<double>(++*j) : static_cast<double>((*j)++) + 0.5;
          return Run{R / lam, 2};
        };
      },
      o == 0 ? 1 : 0);
}

double circle_volume(const CircleSpec& c) { return 2 * std::numbers::pi * c.radius; }

namespace {

struct TorusGeom {
  int p;
  std::vector<double> w, o;
};

TorusGeom torus_geom(const TorusSpec& t) {
  if (t.p < 2 || t.p > kMaxTorusDim) throw std::invalid_argument("torus dimension must be 2..4");
  TorusGeom g;
  g.p = t.p;
  g.w.assign(t.p, 1.0);
  g.o.assign(t.p, 0.0);
  if (!t.radii.empty()) {
    if (static_cast<int>(t.radii.size()) != t.p) throw std::invalid_argument("torus radii size mismatch");
    for (int i = 0; i < t.p; ++i) {
      if (!(t.radii[i] > 0)) throw std::invalid_argument("torus radii must be positive");
      g.w[i] = 1 / t.radii[i];
    }
  }
  if (!t.offsets.empty()) {
    if (static_cast<int>(t.offsets.size()) != t.p) throw std::invalid_argument("torus offsets size mismatch");
    for (int i = 0; i < t.p; ++i) {
      if (t.offsets[i] != 0 && t.offsets[i] != 0.5) throw std::invalid_argument("torus offsets must be 0 or 1/2");
      g.o[i] = t.offsets[i];
    }
  }
  return g;
}

double norm2_of(const TorusGeom& g, const std::array<int, kMaxTorusDim>& k) {
  double s = 0;
  for (int i = 0; i < g.p; ++i) {
    double x = (k[i] + g.o[i]) * g.w[i];
    s += x * x;
  }
  return s;
}

// k with |(k + o) w| <= r, padded by one on each side.
void coord_range(const TorusGeom& g, int i, double r, long* lo, long* hi) {
  *lo = static_cast<long>(std::floor(-r / g.w[i] - g.o[i])) - 1;
  *hi = static_cast<long>(std::ceil(r / g.w[i] - g.o[i])) + 1;
}

void shell_rec(const TorusGeom& g, int i, double lo2, double hi2, double partial, std::array<int, kMaxTorusDim>& k,
               std::vector<LatticePoint>* out) {
  if (i == g.p - 1) {
    double rem_hi = hi2 - partial;
    if (rem_hi <= 0) return;
    double rem_lo = std::max(0.0, lo2 - partial);
    double a = std::sqrt(rem_lo) / g.w[i], b = std::sqrt(rem_hi) / g.w[i];
    // positive side x in [a, b), negative side x in (-b, -a]
    long p1 = static_cast<long>(std::floor(a - g.o[i])) - 1, p2 = static_cast<long>(std::ceil(b - g.o[i])) + 1;
    long n1 = static_cast<long>(std::floor(-b - g.o[i])) - 1, n2 = static_cast<long>(std::ceil(-a - g.o[i])) + 1;
    auto visit = [&](long from, long to) {
      for (long v = from; v <= to; ++v) {
        k[i] = static_cast<int>(v);
        double n = norm2_of(g, k);
        if (n >= lo2 && n < hi2 && n > 0) out->push_back({n, k});
      }
    };
    if (n2 >= p1) {
      visit(n1, p2);
    } else {
      visit(n1, n2);
      visit(p1, p2);
    }
    return;
  }
  long a, b;
  coord_range(g, i, std::sqrt(std::max(0.0, hi2 - partial)), &a, &b);
  for (long v = a; v <= b; ++v) {
    double x = (v + g.o[i]) * g.w[i];
    if (partial + x * x >= hi2) continue;
    k[i] = static_cast<int>(v);
    shell_rec(g, i + 1, lo2, hi2, partial + x * x, k, out);
  }
  k[i] = 0;
}

bool point_less(const LatticePoint& a, const LatticePoint& b) {
  if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
  return a.k < b.k;
}

// Lattice points with lo <= |x| < hi, sorted.
std::vector<LatticePoint> shell(const TorusGeom& g, double lo, double hi) {
  double lo2 = lo * lo, hi2 = hi * hi;
  long a, b;
  coord_range(g, 0, hi, &a, &b);
  std::vector<std::vector<LatticePoint>> parts(static_cast<std::size_t>(b - a + 1));
  parallel_for(parts.size(), [&](std::size_t j) {
    std::array<int, kMaxTorusDim> k{};
    long v = a + static_cast<long>(j);
    double x = (v + g.o[0]) * g.w[0];
    if (x * x >= hi2) return;
    k[0] = static_cast<int>(v);
    shell_rec(g, 1, lo2, hi2, x * x, k, &parts[j]);
  });
  std::vector<LatticePoint> out;
  for (auto& pt : parts) out.insert(out.end(), pt.begin(), pt.end());
  std::sort(out.begin(), out.end(), point_less);
  return out;
}

// Sorted stream of lattice points over expanding shells.
class LatticeStream {
 public:
  explicit LatticeStream(TorusGeom g) : g_(std::move(g)) {
    step_ = *std::min_element(g_.w.begin(), g_.w.end());
  }
  const LatticePoint& peek() {
    while (pos_ >= buf_.size()) {
      double hi = lo_ == 0 ? 2 * step_ : lo_ * 1.1 + step_;
      buf_ = shell(g_, lo_, hi);
      pos_ = 0;
      lo_ = hi;
    }
    return buf_[pos_];
  }
  LatticePoint next() {
    LatticePoint p = peek();
    ++pos_;
    return p;
  }

 private:
  TorusGeom g_;
  double step_ = 1, lo_ = 0;
  std::vector<LatticePoint> buf_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<LatticePoint> torus_lattice_points(const TorusSpec& t, std::size_t count) {
  LatticeStream s(torus_geom(t));
  std::vector<LatticePoint> out;
  out.reserve(count);
  while (out.size() < count) out.push_back(s.next());
  return out;
}

SingularValueSeq torus_singular_values(const TorusSpec& t) {
  TorusGeom g = torus_geom(t);
  std::uint64_t spin = std::uint64_t{1} << (t.p / 2);
  bool zero_mode = std::all_of(g.o.begin(), g.o.end(), [](double x) { return x == 0; });
  return SingularValueSeq(
      "torus" + std::to_string(t.p),
      [g, spin]() -> SingularValueSeq::Cursor {
        auto s = std::make_shared<LatticeStream>(g);
        return [s, spin]() -> std::optional<Run> {
          double n2 = s->next().norm2;
          std::uint64_t count = 1;
          while (std::fabs(s->peek().norm2 - n2) <= 1e-12 * n2) {
            s->next();
            ++count;
          }
          return Run{1 / std::sqrt(n2), count * spin};
        };
      },
      zero_mode ? spin : 0);
}

double torus_volume(const TorusSpec& t) {
  TorusGeom g = torus_geom(t);
  double v = 1;
  for (int i = 0; i < g.p; ++i) v *= 2 * std::numbers::pi / g.w[i];
  return v;
}

SingularValueSeq sphere2_singular_values_experimental(double radius) {
  if (!(radius > 0)) throw std::invalid_argument("sphere radius must be positive");
  return SingularValueSeq("sphere2", [radius]() -> SingularValueSeq::Cursor {
    auto k = std::make_shared<std::uint64_t>(0);
    return [radius, k]() -> std::optional<Run> {
      std::uint64_t j = ++*k;
      return Run{radius / static_cast<double>(j), 4 * j};
    };
  });
}

VolumeCheck circle_volume_check(const CircleSpec& c, const std::vector<std::uint64_t>& schedule) {
  VolumeCheck v;
  v.estimate = dixmier_estimate(circle_singular_values(c), schedule);
  v.c_p_vol = volume_constant(1) * circle_volume(c);
  v.ratio = v.estimate.value / v.c_p_vol;
  return v;
}

VolumeCheck torus_volume_check(const TorusSpec& t, const std::vector<std::uint64_t>& schedule) {
  VolumeCheck v;
  v.estimate = dixmier_estimate(torus_singular_values(t).powered(t.p), schedule);
  v.c_p_vol = volume_constant(t.p) * torus_volume(t);
  v.ratio = v.estimate.value / v.c_p_vol;
  return v;
}

int MetricGraph::add_vertex(const std::string& name) {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it != names_.end()) return static_cast<int>(it - names_.begin());
  names_.push_back(name);
  return static_cast<int>(names_.size()) - 1;
}

void MetricGraph::add_edge(int u, int v, double length) {
  if (u < 0 || v < 0 || u >= size() || v >= size()) throw std::invalid_argument("edge endpoint out of range");
  if (!(length > 0) || !std::isfinite(length)) throw std::invalid_argument("edge length must be positive");
  edges_.push_back({u, v, length});
}

void MetricGraph::add_edge(const std::string& u, const std::string& v, double length) {
  int a = add_vertex(u);
  int b = add_vertex(v);
  add_edge(a, b, length);
}

MetricGraph MetricGraph::from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("graph csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "u,v,length") throw std::invalid_argument("graph csv: header must be u,v,length");
  MetricGraph g;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 3 || cells[0].empty() || cells[1].empty())
      throw std::invalid_argument("graph csv line " + std::to_string(lineno) + ": expected u,v,length");
    double len;
    try {
      std::size_t used = 0;
      len = std::stod(cells[2], &used);
      if (used != cells[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("graph csv line " + std::to_string(lineno) + ": bad length");
    }
    try {
      g.add_edge(cells[0], cells[1], len);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("graph csv line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return g;
}

int MetricGraph::vertex(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::invalid_argument("unknown vertex " + name);
  return static_cast<int>(it - names_.begin());
}

bool MetricGraph::connected() const {
  if (names_.empty()) return false;
  std::vector<int> parent(names_.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = size();
  for (const auto& e : edges_) {
    int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return comps == 1;
}

MetricGraph discretized_circle(int n, double radius) {
  if (n < 3) throw std::invalid_argument("discretized circle needs at least 3 vertices");
  MetricGraph g;
  for (int i = 0; i < n; ++i) g.add_vertex(std::to_string(i));
  double chord = 2 * radius * std::sin(std::numbers::pi / n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, chord);
  return g;
}

namespace {

void check_endpoints(const MetricGraph& g, int x, int y) {
  if (x < 0 || y < 0 || x >= g.size() || y >= g.size()) throw std::invalid_argument("vertex out of range");
  if (!g.connected()) throw DisconnectedGraph("graph is disconnected: the distance is unbounded");
}

}  // namespace

double connes_distance(const MetricGraph& g, int x, int y) {
  check_endpoints(g, x, y);
  std::vector<std::vector<std::pair<int, double>>> adj(g.size());
  for (const auto& e : g.edges()) {
    adj[e.u].push_back({e.v, e.length});
    adj[e.v].push_back({e.u, e.length});
  }
  std::vector<double> dist(g.size(), INFINITY);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[y] = 0;
  pq.push({0, y});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == x) break;
    for (auto [v, l] : adj[u])
      if (d + l < dist[v]) {
        dist[v] = d + l;
        pq.push({dist[v], v});
      }
  }
  return dist[x];
}

double connes_distance_lp(const MetricGraph& g, int x, int y) {
  check_endpoints(g, x, y);
  if (x == y) return 0;
  // a(y) = 0; remaining potentials a >= 0 (the optimum a = d(., y) is nonnegative)
  std::vector<int> col(g.size(), -1);
  int n = 0;
  for (int v = 0; v < g.size(); ++v)
    if (v != y) col[v] = n++;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (const auto& e : g.edges()) {
    if (e.u == e.v) continue;
    for (int sgn : {1, -1}) {
      std::vector<double> row(n, 0.0);
      if (col[e.u] >= 0) row[col[e.u]] += sgn;
      if (col[e.v] >= 0) row[col[e.v]] -= sgn;
      A.push_back(std::move(row));
      b.push_back(e.length);
    }
  }
  std::vector<double> c(n, 0.0);
  c[col[x]] = 1;
  auto r = simplex_max(A, b, c);
  if (r.status != LpResult::Status::Optimal) throw DisconnectedGraph("distance program is unbounded");
  return r.value;
}

}  // namespace spectre
