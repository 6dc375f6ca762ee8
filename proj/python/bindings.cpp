#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spectre/cli.hpp"
#include "spectre/clifford.hpp"
#include "spectre/dixmier.hpp"
#include "spectre/model_triples.hpp"
#include "spectre/wodzicki.hpp"

namespace py = pybind11;
using namespace spectre;

namespace {

py::dict real_structure(int p) {
  RealStructure s = find_real_structure(p);
  py::dict d;
  d["p"] = s.p;
  d["eps"] = s.eps;
  d["eps_prime"] = s.eps_prime;
  d["eps_double_prime"] = s.eps_double_prime ? py::object(py::int_(*s.eps_double_prime)) : py::object(py::none());
  return d;
}

py::dict gravity(int p, bool torsion) {
  GravityAction g = gravity_action(p, torsion);
  py::dict d;
  d["p"] = p;
  d["torsion"] = torsion;
  d["coeff_R"] = to_string(g.coeff_R);
  d["coeff_t2"] = to_string(g.coeff_t2);
  d["c_p"] = g.c_p.str();
  d["integrand"] = g.integrand.str();
  d["averaged"] = g.averaged.str();
  d["traced"] = g.traced.str();
  return d;
}

py::dict estimate(const std::string& name, const std::vector<std::uint64_t>& schedule) {
  auto s = builtin_sequence(name);
  if (!s) throw py::value_error("unknown sequence " + name);
  TraceEstimate e = dixmier_estimate(*s, schedule);
  py::dict d;
  d["value"] = e.value;
  d["error_bar"] = e.error_bar;
  d["ratios"] = e.ratios;
  return d;
}

double distance(const std::vector<std::tuple<std::string, std::string, double>>& edges, const std::string& from,
                const std::string& to) {
  MetricGraph g;
  for (const auto& [u, v, len] : edges) g.add_edge(u, v, len);
  return connes_distance(g, g.vertex(from), g.vertex(to));
}

}  // namespace

PYBIND11_MODULE(_spectre, m) {
  m.doc() = "Spectral triple verification toolkit";

  py::register_exception<JetExhausted>(m, "JetExhausted", PyExc_ArithmeticError);
  py::register_exception<DisconnectedGraph>(m, "DisconnectedGraph", PyExc_ValueError);

  m.def("volume_constant", &volume_constant, py::arg("p"));
  m.def("volume_constant_exact", [](int p) { return volume_constant_exact(p).str(); }, py::arg("p"));
  m.def("spinor_dim", &spinor_dim, py::arg("p"));
  m.def("real_structure", &real_structure, py::arg("p"));
  m.def("gravity_action", &gravity, py::arg("p"), py::arg("torsion") = true);
  m.def("quadratic_form_coeff", [](int p) { return to_string(quadratic_form_coeff(p)); }, py::arg("p"));
  m.def("integrand", [](int p) { return integrand(p).str(); }, py::arg("p"));
  m.def("dixmier_estimate", &estimate, py::arg("sequence"), py::arg("schedule"));
  m.def("connes_distance", &distance, py::arg("edges"), py::arg("source"), py::arg("target"));
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        CliResult r = run_cli(args);
        return py::make_tuple(r.code, r.out, r.err);
      },
      py::arg("args"));
}
