#include "spectre/dixmier.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace spectre {

namespace {

using Cursor = SingularValueSeq::Cursor;

// Neumaier compensated sum.
struct Accum {
  long double sum = 0, c = 0;
  void add(long double x) {
    long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  long double value() const { return sum + c; }
};

Cursor checked(Cursor raw, const std::string& name) {
  auto prev = std::make_shared<double>(INFINITY);
  return [raw = std::move(raw), prev, name]() -> std::optional<Run> {
    auto r = raw();
    if (!r) return r;
    if (!(r->value > 0) || !std::isfinite(r->value))
      throw std::invalid_argument(name + ": singular values must be positive and finite");
    if (r->mult < 1) throw std::invalid_argument(name + ": multiplicity must be at least 1");
    if (r->value > *prev * (1 + 1e-12)) throw std::invalid_argument(name + ": sequence is not non-increasing");
    *prev = r->value;
    return r;
  };
}

// Least-squares intercept and slope.
std::pair<long double, long double> line_fit(const std::vector<long double>& x, const std::vector<long double>& y,
                                             std::size_t n) {
  long double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  long double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  long double c1 = sxy / sxx;
  return {my - c1 * mx, c1};
}

}  // namespace

SingularValueSeq::SingularValueSeq(std::string name, Factory f, std::uint64_t kernel_dim)
    : name_(std::move(name)), factory_(std::move(f)), kernel_dim_(kernel_dim) {}

SingularValueSeq SingularValueSeq::from_runs(std::string name, std::vector<Run> runs, std::uint64_t kernel_dim) {
  auto data = std::make_shared<const std::vector<Run>>(std::move(runs));
  return SingularValueSeq(
      std::move(name),
      [data]() -> Cursor {
        auto i = std::make_shared<std::size_t>(0);
        return [data, i]() -> std::optional<Run> {
          if (*i >= data->size()) return std::nullopt;
          return (*data)[(*i)++];
        };
      },
      kernel_dim);
}

SingularValueSeq SingularValueSeq::from_terms(std::string name, std::function<double(std::uint64_t)> mu) {
  return SingularValueSeq(std::move(name), [mu]() -> Cursor {
    auto n = std::make_shared<std::uint64_t>(0);
    return [mu, n]() -> std::optional<Run> { return Run{mu((*n)++), 1}; };
  });
}

SingularValueSeq SingularValueSeq::harmonic(std::uint64_t mult) {
  return SingularValueSeq(mult == 1 ? "harmonic" : "harmonic" + std::to_string(mult), [mult]() -> Cursor {
    auto n = std::make_shared<std::uint64_t>(0);
    return [mult, n]() -> std::optional<Run> { return Run{1.0 / static_cast<double>(++*n), mult}; };
  });
}

SingularValueSeq SingularValueSeq::geometric(double q) {
  if (!(q > 0 && q < 1)) throw std::invalid_argument("geometric ratio must lie in (0, 1)");
  // stops once q^n underflows; the tail is zero in double precision anyway
  return SingularValueSeq("geometric", [q]() -> Cursor {
    auto v = std::make_shared<double>(1.0);
    return [q, v]() -> std::optional<Run> {
      if (*v < DBL_MIN) return std::nullopt;
      double out = *v;
      *v *= q;
      return Run{out, 1};
    };
  });
}

SingularValueSeq SingularValueSeq::telescoping() {
  return from_terms("telescoping", [](std::uint64_t n) {
    return std::log1p(1.0 / (static_cast<double>(n) + 1.0));
  });
}

SingularValueSeq SingularValueSeq::power_law(double e) {
  if (!(e > 0)) throw std::invalid_argument("power law exponent must be positive");
  return from_terms("power_law", [e](std::uint64_t n) { return std::pow(static_cast<double>(n) + 1.0, -e); });
}

SingularValueSeq SingularValueSeq::oscillating() {
  return SingularValueSeq("oscillating", []() -> Cursor {
    struct State {
      std::uint64_t n = 0;
      double last = INFINITY;
    };
    auto st = std::make_shared<State>();
    return [st]() -> std::optional<Run> {
      std::uint64_t n = st->n++;
      int j = 0;
      // block j holds n in [2^(2^j), 2^(2^(j+1)))
      while (j < 6 && static_cast<double>(n) >= std::ldexp(1.0, 1 << (j + 1))) ++j;
      double a = j % 2 == 0 ? 1.0 / 8 : 23.0 / 8;
      st->last = std::min(st->last, a / (static_cast<double>(n) + 1.0));
      return Run{st->last, 1};
    };
  });
}

SingularValueSeq SingularValueSeq::merged(const SingularValueSeq& a, const SingularValueSeq& b) {
  return SingularValueSeq(
      a.name() + "+" + b.name(),
      [a, b]() -> Cursor {
        struct State {
          Cursor ca, cb;
          std::optional<Run> ra, rb;
        };
        auto st = std::make_shared<State>();
        st->ca = a.cursor();
        st->cb = b.cursor();
        st->ra = st->ca();
        st->rb = st->cb();
        return [st]() -> std::optional<Run> {
          if (!st->ra && !st->rb) return std::nullopt;
          Run out;
          if (st->ra && st->rb && st->ra->value == st->rb->value) {
            out = Run{st->ra->value, st->ra->mult + st->rb->mult};
            st->ra = st->ca();
            st->rb = st->cb();
          } else if (!st->rb || (st->ra && st->ra->value > st->rb->value)) {
            out = *st->ra;
            st->ra = st->ca();
          } else {
            out = *st->rb;
            st->rb = st->cb();
          }
          return out;
        };
      },
      a.kernel_dim() + b.kernel_dim());
}

SingularValueSeq SingularValueSeq::scaled(double lambda) const {
  if (!(lambda > 0)) throw std::invalid_argument("scale must be positive");
  auto self = *this;
  return SingularValueSeq(
      name_,
      [self, lambda]() -> Cursor {
        auto c = self.cursor();
        return [c, lambda]() -> std::optional<Run> {
          auto r = c();
          if (r) r->value *= lambda;
          return r;
        };
      },
      kernel_dim_);
}

SingularValueSeq SingularValueSeq::powered(double p) const {
  if (!(p > 0)) throw std::invalid_argument("power must be positive");
  auto self = *this;
  return SingularValueSeq(
      name_ + "^" + std::to_string(p),
      [self, p]() -> Cursor {
        auto c = self.cursor();
        return [c, p]() -> std::optional<Run> {
          auto r = c();
          if (r) r->value = std::pow(r->value, p);
          return r;
        };
      },
      kernel_dim_);
}

SingularValueSeq SingularValueSeq::with_prefix(std::vector<double> head) const {
  auto self = *this;
  auto h = std::make_shared<const std::vector<double>>(std::move(head));
  return SingularValueSeq(
      name_,
      [self, h]() -> Cursor {
        struct State {
          Cursor c;
          std::size_t i = 0;
          std::uint64_t skip;
        };
        auto st = std::make_shared<State>();
        st->c = self.cursor();
        st->skip = h->size();
        return [st, h]() -> std::optional<Run> {
          if (st->i < h->size()) return Run{(*h)[st->i++], 1};
          while (true) {
            auto r = st->c();
            if (!r) return r;
            if (st->skip >= r->mult) {
              st->skip -= r->mult;
              continue;
            }
            r->mult -= st->skip;
            st->skip = 0;
            return r;
          }
        };
      },
      kernel_dim_);
}

SingularValueSeq::Cursor SingularValueSeq::cursor() const { return checked(factory_(), name_); }

std::vector<Run> SingularValueSeq::take(std::uint64_t terms) const {
  std::vector<Run> out;
  auto c = cursor();
  std::uint64_t have = 0;
  while (have < terms) {
    auto r = c();
    if (!r) break;
    r->mult = std::min(r->mult, terms - have);
    have += r->mult;
    out.push_back(*r);
  }
  return out;
}

std::optional<SingularValueSeq> builtin_sequence(const std::string& name) {
  if (name == "harmonic") return SingularValueSeq::harmonic(1);
  if (name == "harmonic2") return SingularValueSeq::harmonic(2);
  if (name == "geometric") return SingularValueSeq::geometric(0.5);
  if (name == "telescoping") return SingularValueSeq::telescoping();
  if (name == "oscillating") return SingularValueSeq::oscillating();
  return std::nullopt;
}

std::vector<double> partial_sums(const SingularValueSeq& s, const std::vector<std::uint64_t>& ns) {
  for (std::size_t k = 1; k < ns.size(); ++k)
    if (ns[k] <= ns[k - 1]) throw std::invalid_argument("partial sums need increasing N");
  std::vector<double> out;
  out.reserve(ns.size());
  if (ns.empty()) return out;
  auto c = s.cursor();
  Accum acc;
  std::uint64_t count = 0;  // terms consumed: indices 0 .. count-1
  std::size_t k = 0;
  std::optional<Run> r = c();
  while (k < ns.size()) {
    std::uint64_t want = ns[k] + 1;
    while (count < want && r) {
      std::uint64_t take = std::min(r->mult, want - count);
      acc.add(static_cast<long double>(r->value) * static_cast<long double>(take));
      count += take;
      r->mult -= take;
      if (r->mult == 0) r = c();
    }
    out.push_back(static_cast<double>(acc.value()));
    ++k;
  }
  return out;
}

double partial_ratio(const SingularValueSeq& s, std::uint64_t N) {
  if (N < 2) throw std::invalid_argument("partial_ratio requires N >= 2");
  return partial_sums(s, {N})[0] / std::log(static_cast<double>(N));
}

TraceEstimate dixmier_estimate(const SingularValueSeq& s, const std::vector<std::uint64_t>& schedule) {
  if (schedule.size() < 3) throw std::invalid_argument("schedule needs at least 3 points");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (schedule[k] < 2) throw std::invalid_argument("schedule entries must be >= 2");
    if (k > 0 && schedule[k] <= schedule[k - 1]) throw std::invalid_argument("schedule must be increasing");
  }
  auto sums = partial_sums(s, schedule);
  std::size_t n = schedule.size();
  std::vector<long double> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    long double L = std::log(static_cast<long double>(schedule[k]));
    x[k] = 1 / L;
    y[k] = sums[k] / L;
  }
  auto [c0, c1] = line_fit(x, y, n);
  TraceEstimate est;
  est.schedule = schedule;
  for (std::size_t k = 0; k < n; ++k) {
    est.ratios.push_back(static_cast<double>(y[k]));
    est.max_residual = std::max(est.max_residual, static_cast<double>(std::fabs(y[k] - (c0 + c1 * x[k]))));
  }
  // leave-one-out spread of the intercept
  double spread = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<long double> xs, ys;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) {
        xs.push_back(x[j]);
        ys.push_back(y[j]);
      }
    spread = std::max(spread, static_cast<double>(std::fabs(line_fit(xs, ys, n - 1).first - c0)));
  }
  est.value = static_cast<double>(c0);
  est.slope = static_cast<double>(c1);
  est.error_bar = std::max(est.max_residual, spread);
  return est;
}

double pinfty_norm(const SingularValueSeq& s, double p, std::uint64_t N) {
  if (!(p > 1)) throw std::invalid_argument("pinfty_norm requires p > 1");
  if (N < 1) throw std::invalid_argument("pinfty_norm requires N >= 1");
  double alpha = 1 - 1 / p;
  auto c = s.cursor();
  Accum acc;
  double best = 0;
  std::uint64_t n = 0;  // next index
  while (n <= N) {
    auto r = c();
    if (!r) {
      // zeros from here on: the ratio only decreases
      if (n >= 1) break;
      return 0;
    }
    for (std::uint64_t m = 0; m < r->mult && n <= N; ++m, ++n) {
      acc.add(r->value);
      if (n >= 1) best = std::max(best, static_cast<double>(acc.value()) / std::pow(static_cast<double>(n), alpha));
    }
  }
  return best;
}

double p1_norm(const SingularValueSeq& s, double p, std::uint64_t N) {
  if (!(p > 0)) throw std::invalid_argument("p1_norm requires p > 0");
  if (N < 1) throw std::invalid_argument("p1_norm requires N >= 1");
  double e = 1 / p - 1;
  auto c = s.cursor();
  Accum acc;
  std::uint64_t n = 0;
  while (n <= N) {
    auto r = c();
    if (!r) break;
    for (std::uint64_t m = 0; m < r->mult && n <= N; ++m, ++n)
      if (n >= 1) acc.add(std::pow(static_cast<double>(n), e) * r->value);
  }
  return static_cast<double>(acc.value());
}

MeasurabilityReport measurability(const SingularValueSeq& s, double tol, int max_log2) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (max_log2 < 14 || max_log2 > 40) throw std::invalid_argument("max_log2 out of range");
  std::vector<std::uint64_t> ev, od;
  for (int k = 8; k <= max_log2; ++k) (k % 2 == 0 ? ev : od).push_back(std::uint64_t{1} << k);
  MeasurabilityReport r;
  r.even = dixmier_estimate(s, ev);
  r.odd = dixmier_estimate(s, od);
  r.gap = std::fabs(r.even.value - r.odd.value) + r.even.error_bar + r.odd.error_bar;
  r.measurable = r.gap <= tol;
  return r;
}

bool is_measurable(const SingularValueSeq& s, double tol) { return measurability(s, tol).measurable; }

}  // namespace spectre
