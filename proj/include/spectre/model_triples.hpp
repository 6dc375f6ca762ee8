#pragma once

// Spectra of the flat commutative triples, the volume constant, and the
// spectral distance on metric graphs.

#include <array>
#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectre/dixmier.hpp"
#include "spectre/exact.hpp"

namespace spectre {

// c(p) = 2^floor(p/2) / ((4 pi)^(p/2) Gamma(p/2 + 1))
double volume_constant(int p);

// c(p) = coeff * pi^(-pi_power) exactly.
struct PiMultiple {
  Rational coeff;
  int pi_power = 0;
  std::string str() const;
};
PiMultiple volume_constant_exact(int p);

struct VolumeIdentity {
  double lhs = 0;  // 2^floor(p/2) Vol(S^{p-1}) / (p (2 pi)^p)
  double rhs = 0;  // c(p)
  double rel_diff = 0;
  bool equal = false;
};
VolumeIdentity volume_identity(int p);

struct CircleSpec {
  double spin_offset = 0;  // 0 or 1/2
  double radius = 1;
};

// mu_n(|D|^-1): radius/|n + offset| over n in Z, kernel omitted.
SingularValueSeq circle_singular_values(const CircleSpec& c);
double circle_volume(const CircleSpec& c);

constexpr int kMaxTorusDim = 4;

struct TorusSpec {
  int p = 2;
  std::vector<double> radii;    // empty: all 1
  std::vector<double> offsets;  // empty: all 0
};

struct LatticePoint {
  double norm2 = 0;
  std::array<int, kMaxTorusDim> k{};
};

// Lattice vectors with nonzero k + offset, ordered by dual norm then lexicographic k.
std::vector<LatticePoint> torus_lattice_points(const TorusSpec& t, std::size_t count);

// mu of |D|^-1 with spinor multiplicity 2^floor(p/2); kernel omitted.
SingularValueSeq torus_singular_values(const TorusSpec& t);
double torus_volume(const TorusSpec& t);

// Experimental: round S^2 of the given radius, |D| eigenvalue (k+1)/radius with multiplicity 4(k+1).
SingularValueSeq sphere2_singular_values_experimental(double radius = 1);

struct VolumeCheck {
  TraceEstimate estimate;
  double c_p_vol = 0;
  double ratio = 0;
};

// Dixmier estimate of mu^p against c(p) Vol.
VolumeCheck circle_volume_check(const CircleSpec& c, const std::vector<std::uint64_t>& schedule);
VolumeCheck torus_volume_check(const TorusSpec& t, const std::vector<std::uint64_t>& schedule);

struct Edge {
  int u = 0, v = 0;
  double length = 0;
};

class MetricGraph {
 public:
  int add_vertex(const std::string& name);
  void add_edge(int u, int v, double length);
  void add_edge(const std::string& u, const std::string& v, double length);

  // CSV with header "u,v,length".
  static MetricGraph from_csv(std::istream& in);

  int vertex(const std::string& name) const;  // throws if unknown
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int size() const { return static_cast<int>(names_.size()); }
  bool connected() const;

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
};

struct DisconnectedGraph : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// n vertices on a circle of the given radius, consecutive ones joined by chords.
MetricGraph discretized_circle(int n, double radius = 1);

// sup a(x) - a(y) over |a(u) - a(v)| <= length(u,v), via shortest paths.
double connes_distance(const MetricGraph& g, int x, int y);
// The same supremum solved as a linear program on the potentials.
double connes_distance_lp(const MetricGraph& g, int x, int y);

}  // namespace spectre
