// dynfid CLI: state and channel alpha-fidelities plus the four protocol
// reproductions (fig2..fig5) as machine-readable CSV or JSON curve data.
//
// Exit codes: 0 success, 2 usage/validation error, 3 computation-domain
// failure (e.g. a crossover scan that brackets no violation).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynfid/channels.hpp"
#include "dynfid/fidelity.hpp"
#include "dynfid/models.hpp"
#include "dynfid/optimize.hpp"
#include "dynfid/protocols.hpp"
#include "dynfid/qmath.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int n = 2;

  std::vector<double> values() const {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      v[static_cast<size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
  }
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &g.lo, &g.hi, &g.n, &extra) != 3 || g.n < 1)
    throw CLI::ValidationError("grid", "expected lo:hi:n, got '" + s + "'");
  return g;
}

dynfid::BlochVector parse_bloch(const std::string& s) {
  dynfid::BlochVector v;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf%c", &v.x, &v.y, &v.z, &extra) != 3)
    throw CLI::ValidationError("bloch", "expected x,y,z, got '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

// Channel grammar: identity | dephasing:g | noisy_unitary:i:eps |
// pauli_mix:p0,p1,p2,p3 | const:x,y,z
dynfid::QubitChannel parse_channel(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.empty()) throw CLI::ValidationError("channel", "empty channel spec");
  const std::string& kind = parts[0];
  try {
    if (kind == "identity" && parts.size() == 1) return dynfid::identity_channel();
    if (kind == "dephasing" && parts.size() == 2)
      return dynfid::dephasing_channel(std::stod(parts[1]));
    if (kind == "noisy_unitary" && parts.size() == 3)
      return dynfid::noisy_unitary_channel(std::stoi(parts[1]), std::stod(parts[2]));
    if (kind == "pauli_mix" && parts.size() == 2) {
      const std::vector<std::string> ps = split(parts[1], ',');
      if (ps.size() == 4)
        return dynfid::pauli_mix_channel(std::stod(ps[0]), std::stod(ps[1]), std::stod(ps[2]),
                                         std::stod(ps[3]));
    }
    if (kind == "const" && parts.size() == 2) return dynfid::constant_channel(parse_bloch(parts[1]));
  } catch (const CLI::ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw CLI::ValidationError("channel", std::string(e.what()));
  }
  throw CLI::ValidationError("channel", "unrecognized channel spec '" + spec + "'");
}

std::string fmt(double v, const char* pattern = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// Curve output: '#'-prefixed header lines then CSV rows, or one JSON object.
struct CurveWriter {
  std::string command;
  std::string format = "csv";
  std::string output_path;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void set(const std::string& k, const std::string& v) { config.emplace_back(k, v); }
  void add_row(std::vector<std::string> r) { rows.push_back(std::move(r)); }

  void write() const {
    std::ostringstream os;
    if (format == "json") {
      json j;
      j["tool"] = "dynfid";
      j["version"] = kVersion;
      j["config"] = json::object();
      j["config"]["command"] = command;
      for (const auto& [k, v] : config) j["config"][k] = v;
      j["notes"] = comments;
      j["columns"] = columns;
      j["rows"] = rows;
      os << j.dump(2) << "\n";
    } else {
      os << "# dynfid " << kVersion << "\n";
      os << "# command: " << command << "\n";
      os << "# config:";
      for (const auto& [k, v] : config) os << " " << k << "=" << v;
      os << "\n";
      for (const std::string& c : comments) os << "# " << c << "\n";
      os << "# columns: ";
      for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
      os << "\n";
      for (const auto& r : rows) {
        for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
      }
    }
    if (output_path.empty()) {
      std::cout << os.str();
    } else {
      std::ofstream f(output_path);
      if (!f) throw CLI::ValidationError("output", "cannot open '" + output_path + "'");
      f << os.str();
    }
  }
};

int run(int argc, char** argv) {
  CLI::App app{"alpha-fidelities of quantum states, channels and dynamical maps"};
  app.set_version_flag("--version", std::string("dynfid ") + kVersion);
  app.require_subcommand(1);

  std::string format = "csv", output_path;
  app.add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", output_path, "write to a file instead of stdout");
  std::uint64_t seed = 0;
  app.add_option("--seed", seed);

  // state-fid
  auto* state_fid = app.add_subcommand("state-fid", "alpha-fidelity of two qubit states");
  std::string rho1_s, rho2_s;
  double alpha_v = 0.5;
  bool tilde = false;
  state_fid->add_option("--rho1", rho1_s, "Bloch vector x,y,z")->required();
  state_fid->add_option("--rho2", rho2_s, "Bloch vector x,y,z")->required();
  state_fid->add_option("--alpha", alpha_v)->required();
  state_fid->add_flag("--tilde", tilde, "use tr[r1^a r2^{1-a}] instead");

  // chan-fid
  auto* chan_fid = app.add_subcommand("chan-fid", "alpha-fidelity of two qubit channels");
  std::string chan1_s, chan2_s;
  double cf_alpha = 0.5;
  int cf_starts = 32;
  chan_fid->add_option("--chan1", chan1_s)->required();
  chan_fid->add_option("--chan2", chan2_s)->required();
  chan_fid->add_option("--alpha", cf_alpha)->required();
  chan_fid->add_option("--starts", cf_starts);

  // fig2
  auto* fig2 = app.add_subcommand("fig2", "processor dimension bounds for noisy Pauli programming");
  std::string eps_grid_s = "0:1:201";
  fig2->add_option("--eps-grid", eps_grid_s, "lo:hi:n");

  // fig3
  auto* fig3 = app.add_subcommand("fig3", "frequency exclusion for a dephasing probe");
  double f3_T1 = 0.25, f3_T2 = 0.75, f3_g = 1.0;
  std::string omega_scan_s = "2:4:21", f3_alpha_s = "0.05:0.8:16";
  int f3_tpoints = 512;
  fig3->add_option("--T1", f3_T1, "first preparation temperature, units of omega");
  fig3->add_option("--T2", f3_T2, "second preparation temperature, units of omega");
  fig3->add_option("--g", f3_g, "coupling |g|/omega");
  fig3->add_option("--omega-scan", omega_scan_s, "hypothesis frequencies lo:hi:n");
  fig3->add_option("--alpha-grid", f3_alpha_s, "lo:hi:n");
  fig3->add_option("--t-points", f3_tpoints);

  // fig4
  auto* fig4 = app.add_subcommand("fig4", "thermometry bounds with a Jaynes-Cummings probe");
  std::string t_grid_s = "0.075:1.5:20";
  double f4_g = 1.0;
  int f4_ntrunc = 10, f4_tpoints = 400;
  fig4->add_option("--T-grid", t_grid_s, "true kT/omega values lo:hi:n");
  fig4->add_option("--g", f4_g, "coupling |g|/omega");
  fig4->add_option("--ntrunc", f4_ntrunc);
  fig4->add_option("--t-points", f4_tpoints);

  // fig5
  auto* fig5 = app.add_subcommand("fig5", "Loschmidt-echo bounds for the Ising environment");
  double f5_lambda = 0.01, f5_F = 0.98, f5_J = 1.0, f5_delta = 0.1;
  int f5_N = 4000;
  std::string f5_tgrid_s = "0:6:1200";
  fig5->add_option("--lambda", f5_lambda)->required();
  fig5->add_option("--F", f5_F, "state-fidelity lower bound F_half(phi0, phi)")->required();
  fig5->add_option("--J", f5_J);
  fig5->add_option("--delta", f5_delta);
  fig5->add_option("--N", f5_N, "chain sites (even)");
  fig5->add_option("--t-grid", f5_tgrid_s, "lo:hi:n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CurveWriter out;
  out.format = format;
  out.output_path = output_path;

  if (state_fid->parsed()) {
    const dynfid::BlochVector v1 = parse_bloch(rho1_s), v2 = parse_bloch(rho2_s);
    if (v1.norm() > 1.0 + dynfid::kTol.bloch_norm || v2.norm() > 1.0 + dynfid::kTol.bloch_norm) {
      std::cerr << "error: Bloch vector norm exceeds 1\n";
      return 2;
    }
    const dynfid::Alpha alpha(alpha_v);
    const double f = tilde ? dynfid::tilde_fidelity(dynfid::bloch_to_density(v1),
                                                    dynfid::bloch_to_density(v2), alpha)
                           : dynfid::alpha_fidelity_qubit(v1, v2, alpha);
    std::cout << fmt(f) << "\n";
    return 0;
  }

  if (chan_fid->parsed()) {
    const dynfid::QubitChannel e1 = parse_channel(chan1_s), e2 = parse_channel(chan2_s);
    dynfid::OptimizerConfig cfg;
    cfg.starts = cf_starts;
    cfg.seed = seed;
    const dynfid::OptimResult r =
        dynfid::channel_alpha_fidelity(e1, e2, dynfid::Alpha(cf_alpha), cfg);
    json j;
    j["tool"] = "dynfid";
    j["version"] = kVersion;
    j["config"] = {{"command", "chan-fid"}, {"chan1", chan1_s},    {"chan2", chan2_s},
                   {"alpha", cf_alpha},     {"starts", cf_starts}, {"seed", seed}};
    j["value"] = r.value;
    j["argmin_1"] = {r.argmin_1.x, r.argmin_1.y, r.argmin_1.z};
    j["argmin_2"] = {r.argmin_2.x, r.argmin_2.y, r.argmin_2.z};
    j["purity_1"] = 0.5 * (1.0 + r.argmin_1.norm2());
    j["purity_2"] = 0.5 * (1.0 + r.argmin_2.norm2());
    j["evaluations"] = r.evaluations;
    j["converged"] = r.converged;
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  if (fig2->parsed()) {
    const GridSpec eps = parse_grid(eps_grid_s);
    const dynfid::HilleryThresholds href = dynfid::hillery_reference_thresholds();
    out.command = "fig2";
    out.set("eps_grid", eps_grid_s);
    out.comments.push_back("cut_dim4 = " + fmt((3.0 - std::sqrt(6.0)) / 3.0, "%.15g"));
    out.comments.push_back("cut_dim3 = " + fmt((2.0 - std::sqrt(2.0)) / 2.0, "%.15g"));
    out.comments.push_back("reference_cut_dim4 = " + fmt(href.dim4_cut, "%.15g"));
    out.comments.push_back("reference_cut_dim3 = " + fmt(href.dim3_cut, "%.15g"));
    out.columns = {"eps", "min_dim_ours", "min_dim_reference"};
    for (double e : eps.values()) {
      const dynfid::DimensionBound b = dynfid::pauli_program_dimension(e);
      out.add_row(
          {fmt(e), std::to_string(b.min_dim), std::to_string(dynfid::hillery_min_dimension(e))});
    }
    out.write();
    return 0;
  }

  if (fig3->parsed()) {
    const GridSpec ws = parse_grid(omega_scan_s);
    const GridSpec ag = parse_grid(f3_alpha_s);
    const std::vector<double> alphas = ag.values();
    const double beta1 = 1.0 / f3_T1, beta2 = 1.0 / f3_T2;
    const dynfid::OscillatorBath bath = dynfid::OscillatorBath::single_mode(1.0, f3_g);
    const dynfid::DynamicalMap m1 = dynfid::dephasing_map(bath, f3_T1);
    const dynfid::DynamicalMap m2 = dynfid::dephasing_map(bath, f3_T2);
    const dynfid::TimeGrid grid{2.0 * M_PI, f3_tpoints, 48};
    const std::vector<double> rhs = dynfid::exclusion_rhs_curve(m1, m2, alphas, grid);

    out.command = "fig3";
    out.set("T1", fmt(f3_T1));
    out.set("T2", fmt(f3_T2));
    out.set("g", fmt(f3_g));
    out.set("omega_scan", omega_scan_s);
    out.set("alpha_grid", f3_alpha_s);
    out.set("t_points", std::to_string(f3_tpoints));
    out.columns = {"alpha", "rhs"};
    std::vector<dynfid::ExclusionVerdict> verdicts;
    for (double w : ws.values()) {
      verdicts.push_back(dynfid::exclusion_check(w, beta1, beta2, alphas, rhs));
      out.columns.push_back("lhs_omega_" + fmt(w, "%g"));
    }
    for (size_t i = 0; i < alphas.size(); ++i) {
      std::vector<std::string> row = {fmt(alphas[i]), fmt(rhs[i])};
      for (const auto& v : verdicts) row.push_back(fmt(v.lhs_curve[i]));
      out.add_row(std::move(row));
    }
    for (const auto& v : verdicts)
      out.comments.push_back("omega " + fmt(v.omega_hypothesis, "%g") +
                             (v.compatible ? " compatible" : " violates"));
    const std::optional<double> crossover =
        dynfid::frequency_crossover(m1, m2, beta1, beta2, {ws.lo, ws.hi, ws.n}, alphas, grid);
    if (!crossover) {
      std::cerr << "error: omega scan brackets no compatible-to-violating transition\n";
      return 3;
    }
    out.comments.push_back("crossover_omega = " + fmt(*crossover, "%.6g"));
    out.write();
    return 0;
  }

  if (fig4->parsed()) {
    const GridSpec tg = parse_grid(t_grid_s);
    const dynfid::TimeGrid grid{4.0 * M_PI / f4_g, f4_tpoints, 48};
    const dynfid::DynamicalMap map0 = dynfid::jc_map(f4_g, 1.0, 0.0, f4_ntrunc);
    out.command = "fig4";
    out.set("T_grid", t_grid_s);
    out.set("g", fmt(f4_g));
    out.set("ntrunc", std::to_string(f4_ntrunc));
    out.set("t_points", std::to_string(f4_tpoints));
    out.comments.push_back("limiting_temperature = " + fmt(dynfid::limiting_temperature(), "%.6g"));
    out.columns = {"kT_over_omega", "lower", "upper", "upper_valid"};
    for (double T : tg.values()) {
      const dynfid::DynamicalMap mapT = dynfid::jc_map(f4_g, 1.0, T, f4_ntrunc);
      const dynfid::TemperatureBounds b =
          dynfid::thermometry_bounds(map0, mapT, 1.0, dynfid::default_alpha_grid(), grid, {}, T);
      out.add_row({fmt(T), fmt(b.lower), b.upper ? fmt(*b.upper) : std::string(),
                   b.upper_valid ? "1" : "0"});
    }
    out.write();
    return 0;
  }

  if (fig5->parsed()) {
    if (f5_N % 2 != 0 || f5_N < 4) {
      std::cerr << "error: N must be even and >= 4\n";
      return 2;
    }
    if (!(f5_F >= 0.0 && f5_F <= 1.0)) {
      std::cerr << "error: F must lie in [0,1]\n";
      return 2;
    }
    const GridSpec tg = parse_grid(f5_tgrid_s);
    const dynfid::IsingChain chain{f5_J, f5_lambda, f5_delta, f5_N};
    const std::vector<double> ts = tg.values();
    std::vector<double> l0(ts.size()), lo(ts.size()), hi(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
      l0[i] = dynfid::loschmidt_ground(chain, ts[i]);
      const dynfid::LoschmidtInterval b = dynfid::loschmidt_bounds_from_fidelity(f5_F, l0[i]);
      lo[i] = b.lower;
      hi[i] = b.upper;
    }
    const dynfid::RevivalVerdict v = dynfid::detect_revival(ts, hi, lo);
    out.command = "fig5";
    out.set("lambda", fmt(f5_lambda));
    out.set("F", fmt(f5_F));
    out.set("J", fmt(f5_J));
    out.set("delta", fmt(f5_delta));
    out.set("N", std::to_string(f5_N));
    out.set("t_grid", f5_tgrid_s);
    out.comments.push_back(std::string("revival = ") + (v.revival ? "true" : "false"));
    if (v.found_minimum)
      out.comments.push_back("upper_minimum: t = " + fmt(v.minimum_time, "%.6g") +
                             ", level = " + fmt(v.minimum_level, "%.6g"));
    if (v.crossing_time)
      out.comments.push_back("crossing_time = " + fmt(*v.crossing_time, "%.6g"));
    out.columns = {"t", "L_ground", "L_lo", "L_hi"};
    for (size_t i = 0; i < ts.size(); ++i)
      out.add_row({fmt(ts[i]), fmt(l0[i]), fmt(lo[i]), fmt(hi[i])});
    out.write();
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
