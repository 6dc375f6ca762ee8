#pragma once

// Singular-value sequences, the (1,inf), (p,inf) and (p,1) functionals, and
// extrapolated Dixmier trace estimates.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spectre {

struct Run {
  double value = 0;
  std::uint64_t mult = 1;
};

// mu_0 >= mu_1 >= ... > 0 as (value, multiplicity) runs, produced lazily.
// A finite run list means mu_n = 0 past its end.
class SingularValueSeq {
 public:
  using Cursor = std::function<std::optional<Run>()>;
  using Factory = std::function<Cursor()>;

  SingularValueSeq(std::string name, Factory f, std::uint64_t kernel_dim = 0);

  static SingularValueSeq from_runs(std::string name, std::vector<Run> runs, std::uint64_t kernel_dim = 0);
  // One term per index; mu must be non-increasing.
  static SingularValueSeq from_terms(std::string name, std::function<double(std::uint64_t)> mu);

  // mult copies of 1/(n+1).
  static SingularValueSeq harmonic(std::uint64_t mult = 1);
  static SingularValueSeq geometric(double q = 0.5);
  // log((n+2)/(n+1))
  static SingularValueSeq telescoping();
  // (n+1)^(-e)
  static SingularValueSeq power_law(double e);
  // a(n)/(n+1) with a(n) alternating between 1/8 and 23/8 on the blocks
  // [2^(2^j), 2^(2^(j+1))), kept non-increasing by plateaus; the partial
  // ratio oscillates between roughly 1 and 2.
  static SingularValueSeq oscillating();

  static SingularValueSeq merged(const SingularValueSeq& a, const SingularValueSeq& b);
  SingularValueSeq scaled(double lambda) const;
  SingularValueSeq powered(double p) const;
  // Replaces mu_0 .. mu_{k-1} by the given values.
  SingularValueSeq with_prefix(std::vector<double> head) const;

  // Fresh traversal; throws std::invalid_argument on a run breaking the invariants.
  Cursor cursor() const;
  // Runs covering indices 0 .. terms-1 (the last run is cut).
  std::vector<Run> take(std::uint64_t terms) const;

  const std::string& name() const { return name_; }
  std::uint64_t kernel_dim() const { return kernel_dim_; }

 private:
  std::string name_;
  Factory factory_;
  std::uint64_t kernel_dim_ = 0;
};

// Built-in sequences by name: harmonic, harmonic2, geometric, telescoping, oscillating.
std::optional<SingularValueSeq> builtin_sequence(const std::string& name);

// S(N) = sum_{n=0}^{N} mu_n for each N of an increasing list, in one pass.
std::vector<double> partial_sums(const SingularValueSeq& s, const std::vector<std::uint64_t>& ns);

// S(N) / log N, N >= 2.
double partial_ratio(const SingularValueSeq& s, std::uint64_t N);

struct TraceEstimate {
  double value = 0;
  double error_bar = 0;
  double max_residual = 0;
  double slope = 0;  // c1
  std::vector<std::uint64_t> schedule;
  std::vector<double> ratios;
  std::string model = "c0 + c1/log N";
};

// Least-squares fit of partial_ratio(N) to c0 + c1/log N. The error bar is the larger of
// the max |residual| and the leave-one-out spread of c0.
TraceEstimate dixmier_estimate(const SingularValueSeq& s, const std::vector<std::uint64_t>& schedule);

// sup_{1 <= M <= N} S(M) / M^(1 - 1/p), p > 1.
double pinfty_norm(const SingularValueSeq& s, double p, std::uint64_t N);
// sum_{n=1}^{N} n^(1/p - 1) mu_n; the n = 0 term is skipped.
double p1_norm(const SingularValueSeq& s, double p, std::uint64_t N);

struct MeasurabilityReport {
  TraceEstimate even;  // N = 2^k, k even
  TraceEstimate odd;   // N = 2^k, k odd
  double gap = 0;      // |c0 difference| + both error bars
  bool measurable = false;
};

MeasurabilityReport measurability(const SingularValueSeq& s, double tol, int max_log2 = 22);
bool is_measurable(const SingularValueSeq& s, double tol);

}  // namespace spectre
