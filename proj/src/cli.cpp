#include "spectre/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spectre/clifford.hpp"
#include "spectre/dixmier.hpp"
#include "spectre/model_triples.hpp"
#include "spectre/univdiff.hpp"
#include "spectre/wodzicki.hpp"

namespace spectre {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Report {
  json body;
  bool ok = true;
  std::string csv;  // set when the csv format was requested
};

std::vector<std::uint64_t> parse_schedule(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cell.size() || v < 2) throw UsageError("bad schedule entry '" + cell + "'");
    if (!out.empty() && v <= out.back()) throw UsageError("schedule must be strictly increasing");
    out.push_back(v);
  }
  if (out.size() < 3) throw UsageError("schedule needs at least three entries");
  return out;
}

json estimate_json(const TraceEstimate& e) {
  return {{"value", e.value},         {"error_bar", e.error_bar}, {"max_residual", e.max_residual},
          {"slope", e.slope},         {"model", e.model},         {"schedule", e.schedule},
          {"ratios", e.ratios}};
}

std::string ratios_csv(const TraceEstimate& e) {
  std::ostringstream os;
  os.precision(17);
  os << "N,ratio\n";
  for (std::size_t k = 0; k < e.schedule.size(); ++k) os << e.schedule[k] << "," << e.ratios[k] << "\n";
  return os.str();
}

json exact_json(const Rational& q) { return {{"exact", to_string(q)}, {"decimal", q.get_d()}}; }

Report clifford_table() {
  Report r;
  json rows = json::array();
  for (int p = 1; p <= 8; ++p) {
    RealStructure s = find_real_structure(p);
    RealSigns ref = reference_real_signs(p);
    bool match = s.eps == ref.eps && s.eps_prime == ref.eps_prime && s.eps_double_prime == ref.eps_double_prime;
    r.ok = r.ok && match;
    json row = {{"p", p}, {"eps", s.eps}, {"eps_prime", s.eps_prime}};
    row["eps_double_prime"] = s.eps_double_prime ? json(*s.eps_double_prime) : json(nullptr);
    row["spinor_dim"] = spinor_dim(p);
    row["matches_table"] = match;
    rows.push_back(row);
  }
  r.body = {{"subcommand", "clifford-table"}, {"rows", rows}, {"ok", r.ok}};
  return r;
}

Report hochschild(std::uint64_t seed, int chains) {
  Report r;
  json ids = json::array();
  for (const auto& res : run_identity_suite(seed, chains)) {
    ids.push_back({{"model", res.model},
                   {"identity", res.identity},
                   {"checked", res.checked},
                   {"failed", res.failed},
                   {"pass", res.failed == 0}});
    r.ok = r.ok && res.failed == 0;
  }
  // junk on the truncated circle
  ModelAlgebra m = ModelAlgebra::circle(40, 12, 2);
  Chain du = Chain::elem({0, 1}), u = Chain::elem({1});
  Chain xi = chain_mul(du, u, m) - chain_mul(u, du, m);
  json junk = json::array();
  auto add = [&](const std::string& name, bool pass) {
    junk.push_back({{"model", m.name()}, {"identity", name}, {"pass", pass}});
    r.ok = r.ok && pass;
  };
  add("pi_xi_zero", m.on_window(represent(xi, m)).is_zero());
  add("pi_delta_xi_minus_2u2", m.equal_on_window(represent(delta(xi, m), m), m.rep(2) * Gauss(-2)));
  Chain cycle = Chain::elem({-1, 1});
  GMatrix gamma = represent(cycle, m);
  bool cyc = true;
  for (int a : {-2, -1, 1, 2}) {
    Chain cda = append_delta(cycle, a, m);
    cyc = cyc && m.equal_on_window(represent(cda - sigma_op(cda, m), m), gamma * m.drep(a) * Gauss(2));
  }
  add("one_minus_sigma_cycle", cyc);
  r.body = {{"subcommand", "hochschild"}, {"seed", seed}, {"chains", chains},
            {"identities", ids},          {"junk", junk}, {"ok", r.ok}};
  return r;
}

SingularValueSeq read_runs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw UsageError(path + ": empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "value,multiplicity") throw UsageError(path + ": header must be value,multiplicity");
  std::vector<Run> runs;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.find(',');
    Run run;
    try {
      std::size_t a = 0, b = 0;
      if (comma == std::string::npos) throw std::invalid_argument("");
      std::string v = line.substr(0, comma), k = line.substr(comma + 1);
      run.value = std::stod(v, &a);
      run.mult = std::stoull(k, &b);
      if (a != v.size() || b != k.size() || k.find('-') != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw UsageError(path + " line " + std::to_string(lineno) + ": expected value,multiplicity");
    }
    runs.push_back(run);
  }
  try {
    return SingularValueSeq::from_runs(path, std::move(runs));
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Report dixmier(const std::string& name, const std::string& csv, const std::vector<std::uint64_t>& schedule,
               double power, bool want_csv) {
  if (name.empty() == csv.empty()) throw UsageError("give exactly one of --sequence or --csv");
  std::optional<SingularValueSeq> s;
  if (!name.empty()) {
    s = builtin_sequence(name);
    if (!s) throw UsageError("unknown sequence '" + name + "'");
  } else {
    s = read_runs(csv);
  }
  if (power != 1) s = s->powered(power);
  TraceEstimate e = dixmier_estimate(*s, schedule);
  Report r;
  r.ok = std::isfinite(e.value) && std::isfinite(e.error_bar);
  r.body = {{"subcommand", "dixmier"},
            {"sequence", name.empty() ? json(nullptr) : json(name)},
            {"csv", csv.empty() ? json(nullptr) : json(csv)},
            {"power", power},
            {"estimate", estimate_json(e)},
            {"ok", r.ok}};
  if (want_csv) r.csv = ratios_csv(e);
  return r;
}

Report volume(const std::string& model, int p, const std::vector<std::uint64_t>& schedule, double radius,
              double offset, double tol, bool want_csv) {
  VolumeCheck v;
  if (model == "circle") {
    if (p != 1) throw UsageError("circle model has p = 1");
    v = circle_volume_check({offset, radius}, schedule);
  } else if (model == "torus") {
    if (p < 2 || p > kMaxTorusDim) throw UsageError("torus model needs 2 <= p <= " + std::to_string(kMaxTorusDim));
    TorusSpec t{p, std::vector<double>(p, radius), std::vector<double>(p, offset)};
    v = torus_volume_check(t, schedule);
  } else {
    throw UsageError("unknown model '" + model + "'");
  }
  Report r;
  r.ok = std::abs(v.ratio - 1) <= tol;
  PiMultiple c = volume_constant_exact(p);
  r.body = {{"subcommand", "volume"},
            {"model", model},
            {"p", p},
            {"radius", radius},
            {"offset", offset},
            {"estimate", v.estimate.value},
            {"error_bar", v.estimate.error_bar},
            {"c_p", {{"exact", c.str()}, {"decimal", volume_constant(p)}}},
            {"c_p_vol", v.c_p_vol},
            {"ratio", v.ratio},
            {"tolerance", tol},
            {"detail", estimate_json(v.estimate)},
            {"ok", r.ok}};
  if (want_csv) r.csv = ratios_csv(v.estimate);
  return r;
}

Report distance(const std::string& path, const std::string& from, const std::string& to) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  MetricGraph g;
  int x = 0, y = 0;
  try {
    g = MetricGraph::from_csv(in);
    x = g.vertex(from);
    y = g.vertex(to);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Report r;
  r.body = {{"subcommand", "distance"}, {"graph", path}, {"from", from}, {"to", to},
            {"vertices", g.size()},     {"edges", g.edges().size()}};
  try {
    double sp = connes_distance(g, x, y);
    double lp = connes_distance_lp(g, x, y);
    r.ok = std::abs(sp - lp) <= 1e-9 * std::max(1.0, std::abs(sp));
    r.body["distance"] = sp;
    r.body["lp_distance"] = lp;
    r.body["dual_gap"] = std::abs(sp - lp);
  } catch (const DisconnectedGraph& e) {
    r.ok = false;
    r.body["distance"] = nullptr;
    r.body["lp_distance"] = nullptr;
    r.body["error"] = e.what();
  }
  r.body["ok"] = r.ok;
  return r;
}

json multiple_json(const Rational& k, int p, double cp) {
  std::string s = to_string(k) + "·c(" + std::to_string(p) + ")";
  return {{"exact", s}, {"rational", to_string(k)}, {"decimal", k.get_d() * cp}};
}

json invariant_json(const ScalarInvariant& s) {
  json terms = json::object();
  for (const auto& [v, c] : s.coeff) terms[invariant_name(v)] = exact_json(c);
  return {{"text", s.str()}, {"times_spinor_dim", s.times_spinor_dim}, {"terms", terms}};
}

Report wres(int p, const std::string& parity, bool torsion) {
  if (p < 2 || p > 8) throw UsageError("wres supports 2 <= p <= 8");
  if ((parity == "even") != (p % 2 == 0)) throw UsageError("parity " + parity + " does not match p");
  GravityAction g = gravity_action(p, torsion);
  double cp = volume_constant(p);
  Report r;
  r.body = {{"subcommand", "wres"},
            {"p", p},
            {"parity", parity},
            {"torsion", torsion},
            {"integrand", g.integrand.str()},
            {"averaged", invariant_json(g.averaged)},
            {"traced", invariant_json(g.traced)},
            {"c_p", {{"exact", g.c_p.str()}, {"decimal", cp}}},
            {"coeff_R", multiple_json(g.coeff_R, p, cp)},
            {"coeff_t2", multiple_json(g.coeff_t2, p, cp)},
            {"quadratic_form_positive", p == 2 ? json(nullptr) : json(g.coeff_t2 > 0)},
            {"ok", true}};
  return r;
}

std::string threads_env_error() {
  const char* env = std::getenv("SPECTRE_THREADS");
  if (!env) return {};
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v <= 0) return "SPECTRE_THREADS must be a positive integer";
  return {};
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CLI::App app{"spectre: verification toolkit for commutative spectral triples", "spectre"};
  app.require_subcommand(1);
  std::string format = "json";

  auto* ct = app.add_subcommand("clifford-table", "real-structure signs for p = 1..8");

  auto* hs = app.add_subcommand("hochschild", "Hochschild and universal-form identity suite");
  std::uint64_t seed = 1;
  int chains = 500;
  hs->add_option("--seed", seed, "random seed");
  hs->add_option("--chains", chains, "chains per identity")->check(CLI::Range(1, 100000));

  auto* dx = app.add_subcommand("dixmier", "Dixmier trace estimate of a singular value sequence");
  std::string seq_name, seq_csv, sched_s = "1024,8192,65536,524288,4194304";
  double power = 1;
  dx->add_option("--sequence", seq_name, "harmonic, harmonic2, geometric, telescoping, oscillating");
  dx->add_option("--csv", seq_csv, "CSV of value,multiplicity runs in decreasing order");
  dx->add_option("--schedule", sched_s, "increasing N values");
  dx->add_option("--power", power, "raise the sequence to this power")->check(CLI::PositiveNumber);
  dx->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* vo = app.add_subcommand("volume", "Dixmier volume of a flat model against c(p) Vol");
  std::string model;
  int p_vol = 1;
  double radius = 1, offset = 0, tol = 0.02;
  std::string vsched = "10000,100000,1000000,10000000";
  vo->add_option("--model", model, "circle or torus")->required()->check(CLI::IsMember({"circle", "torus"}));
  vo->add_option("--p", p_vol, "dimension");
  vo->add_option("--schedule", vsched, "increasing N values");
  vo->add_option("--radius", radius)->check(CLI::PositiveNumber);
  vo->add_option("--offset", offset, "spin offset, 0 or 1/2")->check(CLI::Range(0.0, 0.5));
  vo->add_option("--tolerance", tol)->check(CLI::PositiveNumber);
  vo->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* di = app.add_subcommand("distance", "spectral distance on a metric graph");
  std::string graph, from, to;
  di->add_option("--graph", graph, "CSV with header u,v,length")->required();
  di->add_option("--from", from)->required();
  di->add_option("--to", to)->required();

  auto* wr = app.add_subcommand("wres", "residue integrand and gravity action coefficients");
  int p_w = 4;
  std::string parity, torsion = "on";
  wr->add_option("--p", p_w)->required();
  wr->add_option("--parity", parity)->required()->check(CLI::IsMember({"even", "odd"}));
  wr->add_option("--torsion", torsion)->check(CLI::IsMember({"on", "off"}));

  CliResult res;
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    res.out = app.help();
    return res;
  } catch (const CLI::ParseError& e) {
    res.code = kExitUsage;
    res.err = std::string(e.what()) + "\n" + app.help();
    return res;
  }
  if (auto msg = threads_env_error(); !msg.empty()) {
    res.code = kExitUsage;
    res.err = msg + "\n";
    return res;
  }

  Report r;
  try {
    if (ct->parsed())
      r = clifford_table();
    else if (hs->parsed())
      r = hochschild(seed, chains);
    else if (dx->parsed())
      r = dixmier(seq_name, seq_csv, parse_schedule(sched_s), power, format == "csv");
    else if (vo->parsed())
      r = volume(model, p_vol, parse_schedule(vsched), radius, offset, tol, format == "csv");
    else if (di->parsed())
      r = distance(graph, from, to);
    else if (wr->parsed())
      r = wres(p_w, parity, torsion == "on");
  } catch (const UsageError& e) {
    res.code = kExitUsage;
    res.err = std::string("error: ") + e.what() + "\n";
    return res;
  } catch (const std::exception& e) {
    res.code = kExitCheckFailed;
    res.err = std::string("error: ") + e.what() + "\n";
    return res;
  }
  res.code = r.ok ? kExitOk : kExitCheckFailed;
  res.out = r.csv.empty() ? r.body.dump(2) + "\n" : r.csv;
  return res;
}

}  // namespace spectre
