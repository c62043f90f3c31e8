#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "emscat/forward.hpp"
#include "emscat/irgnm.hpp"

#include <omp.h>

using namespace emscat;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw ConfigError("config '" + path + "': expected \"version\": 1");
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DielectricConfig parse_dielectric(const json& j) {
  if (!j.contains("dielectric")) throw ConfigError("config: missing \"dielectric\"");
  const json& d = j["dielectric"];
  DielectricConfig cfg;
  try {
    cfg.kappa_e = d.at("kappa_e").get<Real>();
    cfg.kappa_i = d.at("kappa_i").get<Real>();
    cfg.mu_e = d.at("mu_e").get<Real>();
    cfg.mu_i = d.at("mu_i").get<Real>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad \"dielectric\": ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: \"dielectric\": ") + e.what());
  }
  return cfg;
}

StarShape parse_star(const json& j, const char* field) {
  if (j.contains("file")) return star_from_json(slurp(j["file"].get<std::string>()));
  if (j.contains("coeffs")) return star_from_json(j.dump());
  throw ConfigError(std::string("config: \"") + field + "\" needs \"file\" or inline \"coeffs\"");
}

std::shared_ptr<const SurfaceParametrization> parse_shape(const json& j) {
  if (!j.contains("shape")) throw ConfigError("config: missing \"shape\"");
  const json& s = j["shape"];
  std::string label = s.at("label").get<std::string>();
  try {
    if (label == "star")
      return std::shared_ptr<const SurfaceParametrization>(star_to_param(parse_star(s, "shape")));
    Real radius = s.value("radius", 1.0);
    return std::shared_ptr<const SurfaceParametrization>(make_shape(label, radius));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: \"shape\": ") + e.what());
  }
}

std::vector<PlaneWave> parse_incidents(const json& j) {
  if (!j.contains("incidents")) throw ConfigError("config: missing \"incidents\"");
  std::vector<PlaneWave> waves;
  for (const auto& e : j["incidents"]) {
    PlaneWave w;
    w.d = {e.at("d").at(0).get<Real>(), e.at("d").at(1).get<Real>(), e.at("d").at(2).get<Real>()};
    w.p = {e.at("p").at(0).get<Real>(), e.at("p").at(1).get<Real>(), e.at("p").at(2).get<Real>()};
    try {
      validate_incident(w);
    } catch (const std::exception& ex) {
      throw ConfigError(std::string("config: \"incidents\": ") + ex.what());
    }
    waves.push_back(w);
  }
  if (waves.empty()) throw ConfigError("config: \"incidents\" is empty");
  return waves;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

int cmd_forward(const std::string& config_path, const std::string& out_path) {
  json j = load_config(config_path);
  DielectricConfig cfg = parse_dielectric(j);
  auto shape = parse_shape(j);
  if (!j.contains("orders")) throw ConfigError("config: missing \"orders\"");
  std::vector<int> orders = j["orders"].get<std::vector<int>>();
  int n_far = j.value("n_far", 25);
  auto rows = convergence_experiment(shape, cfg, orders, n_far);
  write_output(out_path, convergence_csv(rows));
  return 0;
}

int cmd_make_data(const std::string& config_path, const std::string& out_path,
                  std::uint64_t seed_override, bool has_seed, bool allow_inverse_crime) {
  json j = load_config(config_path);
  DielectricConfig cfg = parse_dielectric(j);
  if (!j.contains("truth")) throw ConfigError("config: missing \"truth\"");
  StarShape truth = parse_star(j["truth"], "truth");
  auto waves = parse_incidents(j);
  Real noise = j.value("noise_level", 0.0);
  std::uint64_t seed = has_seed ? seed_override : j.value("seed", std::uint64_t{1});
  int n_fwd = j.value("n_fwd", 12);
  int n_synth = j.value("n_synth", 0);
  if (n_synth == 0) n_synth = n_fwd + 5;
  int n_far = j.value("n_far", 25);
  if (n_synth == n_fwd && !allow_inverse_crime)
    throw ConfigError(
        "config: n_synth equals n_fwd (inverse crime); pass --allow-inverse-crime to force");
  MeasurementSet m = synthesize_data(truth, cfg, waves, noise, seed, n_synth, n_far);
  write_output(out_path, measurements_to_json(m));
  return 0;
}

json iterate_to_json(const IrgnmIterate& it) {
  json row;
  row["N"] = it.N;
  row["alpha"] = it.alpha;
  row["residual"] = it.residual;
  auto arr = json::array();
  for (int l = 0; l <= it.r_coeffs.n; ++l)
    for (int m = -l; m <= l; ++m) {
      Complex c = it.r_coeffs.at(l, m);
      if (c != Complex{}) arr.push_back({l, m, std::real(c), std::imag(c)});
    }
  row["r_coeffs"] = arr;
  return row;
}

int cmd_reconstruct(const std::string& config_path, const std::string& data_path,
                    const std::string& out_path, const std::string& history_path,
                    const std::string& resume_path) {
  json j = load_config(config_path);
  DielectricConfig cfg = parse_dielectric(j);
  IrgnmConfig icfg;
  if (j.contains("irgnm")) {
    const json& c = j["irgnm"];
    icfg.alpha0 = c.value("alpha0", icfg.alpha0);
    icfg.decay = c.value("decay", icfg.decay);
    icfg.tau = c.value("tau", icfg.tau);
    icfg.s = c.value("s", icfg.s);
    icfg.max_newton = c.value("max_newton", icfg.max_newton);
    icfg.cg_tol = c.value("cg_tol", icfg.cg_tol);
    icfg.cg_max = c.value("cg_max", icfg.cg_max);
    icfg.n_fwd = c.value("n_fwd", icfg.n_fwd);
    icfg.n_inv = c.value("n_inv", icfg.n_inv);
    icfg.n_far = c.value("n_far", icfg.n_far);
    icfg.debug_probes = c.value("debug_probes", icfg.debug_probes);
  }
  try {
    icfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: \"irgnm\": ") + e.what());
  }
  MeasurementSet meas = measurements_from_json(slurp(data_path));
  if (meas.n_far != icfg.n_far)
    throw ConfigError("reconstruct: measurement far grid does not match irgnm.n_far");

  StarShape q0 = StarShape::sphere(icfg.n_inv, 1.0);
  if (!resume_path.empty())
    q0 = star_from_json(slurp(resume_path));
  else if (j.contains("initial_guess"))
    q0 = parse_star(j["initial_guess"], "initial_guess");

  std::ofstream hist;
  if (!history_path.empty()) {
    hist.open(history_path);
    if (!hist) throw std::runtime_error("cannot write '" + history_path + "'");
  }
  IrgnmObserver observer;
  if (hist.is_open())
    observer = [&hist](const IrgnmIterate& it) { hist << iterate_to_json(it) << "\n"; };

  IrgnmResult res = run_irgnm(meas, icfg, cfg, q0, observer);
  std::cerr << "stopped after " << res.history.size() << " iterate(s): " << res.stop_reason
            << ", final residual " << (res.history.empty() ? 0.0 : res.history.back().residual)
            << "\n";
  write_output(out_path, star_to_json(res.final_shape));
  return res.stop_reason == "forward_failure" ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectral solver for dielectric obstacle scattering and star-shaped boundary "
      "reconstruction"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path, data_path, history_path, resume_path;
  std::uint64_t seed = 0;
  int threads = 0;
  bool allow_inverse_crime = false;

  app.add_option("--threads", threads, "OpenMP thread count (0 = library default)");

  auto* fwd = app.add_subcommand("forward", "Far-field convergence study, CSV output");
  fwd->add_option("--config", config_path, "JSON run configuration")->required();
  fwd->add_option("--out", out_path, "output CSV path ('-' for stdout)");

  auto* mk = app.add_subcommand("make-data", "Synthesize noisy far-field measurements");
  mk->add_option("--config", config_path, "JSON run configuration")->required();
  mk->add_option("--out", out_path, "output measurement JSON path");
  auto* seed_opt = mk->add_option("--seed", seed, "override the config seed");
  mk->add_flag("--allow-inverse-crime", allow_inverse_crime,
               "permit n_synth == n_fwd data synthesis");

  auto* rec = app.add_subcommand("reconstruct", "Run the regularized Newton reconstruction");
  rec->add_option("--config", config_path, "JSON run configuration")->required();
  rec->add_option("--data", data_path, "measurement JSON from make-data")->required();
  rec->add_option("--out", out_path, "output shape JSON path");
  rec->add_option("--history", history_path, "iterate history as JSON lines");
  rec->add_option("--resume", resume_path, "start from a saved shape/iterate file");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (fwd->parsed()) return cmd_forward(config_path, out_path);
    if (mk->parsed())
      return cmd_make_data(config_path, out_path, seed, seed_opt->count() > 0,
                           allow_inverse_crime);
    if (rec->parsed())
      return cmd_reconstruct(config_path, data_path, out_path, history_path, resume_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
