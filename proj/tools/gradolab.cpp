#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gradolab/config_io.hpp"
#include "gradolab/csv.hpp"
#include "gradolab/manifest.hpp"
#include "gradolab/stability.hpp"
#include "gradolab/svg.hpp"

namespace fs = std::filesystem;
using namespace gradolab;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Emitter {
  fs::path out_dir;
  RunManifest manifest;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  explicit Emitter(const std::string& dir, int argc, char** argv) : out_dir(dir) {
    fs::create_directories(out_dir);
    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
    manifest.command_line = cmd.str();
  }

  void emit(const std::string& name, const std::string& contents) {
    write_file((out_dir / name).string(), contents);
    manifest.outputs.push_back(name);
  }

  void finish() {
    manifest.duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_file((out_dir / "manifest.json").string(), manifest_json(manifest));
  }
};

// deterministic thinning to at most max_rows states
std::vector<NetworkState> thin(std::vector<NetworkState> traj, size_t max_rows) {
  if (traj.size() <= max_rows) return traj;
  const size_t stride = (traj.size() + max_rows - 1) / max_rows;
  std::vector<NetworkState> out;
  for (size_t i = 0; i < traj.size(); i += stride) out.push_back(traj[i]);
  if (out.back().time != traj.back().time) out.push_back(traj.back());
  return out;
}

std::vector<NetworkState> rtm_trajectory(const RunSetup& setup, double t_end) {
  NetworkState state{0.0, setup.cfg.initial.c.cwiseMax(setup.rtm.floor)};
  std::vector<NetworkState> traj{state};
  RtmDiagnostics diag;
  double dt = setup.rtm.dt_init;
  const double record_every = t_end / 1000.0;
  double next_record = record_every;
  while (state.time < t_end) {
    double dt_try = std::min(dt, t_end - state.time);
    rtm_advance(state, dt_try, setup.cfg, setup.rtm, diag);
    dt = dt_try;
    if (state.time >= next_record || state.time >= t_end) {
      traj.push_back(state);
      while (next_record <= state.time) next_record += record_every;
    }
  }
  return traj;
}

std::string equilibria_csv(const RunSetup& setup) {
  const auto& cfg = setup.cfg;
  const int n = cfg.n_cells();
  const int m = cfg.n_species();
  const int dim = cfg.dimension();
  const auto report = equilibrium_report(cfg, setup.ode);

  std::ostringstream os;
  os << "label,class,margin";
  for (int i = 0; i < n; ++i) {
    os << ",S_" << (i + 1);
    for (int j = 0; j < m; ++j) os << ",B_" << cfg.species[j].name << "_" << (i + 1);
  }
  for (int k = 0; k < dim; ++k) os << ",eig_re_" << (k + 1) << ",eig_im_" << (k + 1);
  os << "\n";

  for (const auto& [eq, cls] : report) {
    os << to_string(eq.label) << "," << to_string(cls.kind) << "," << format_double(cls.margin);
    for (Eigen::Index i = 0; i < eq.state.size(); ++i) os << "," << format_double(eq.state[i]);
    // closed-form equilibria live on a single cell; pad if the config is larger
    for (Eigen::Index i = eq.state.size(); i < dim; ++i) os << ",";
    NetworkConfig local = cfg;
    if (eq.state.size() == dim) {
      const auto spec = point_spectrum(local, eq.state);
      for (const auto& ev : spec.eigenvalues)
        os << "," << format_double(ev.real()) << "," << format_double(ev.imag());
    } else {
      for (int k = 0; k < dim; ++k) os << ",,";
    }
    os << "\n";
  }
  return os.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Dual-engine chemostat / reactive-transport comparison toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, engine = "ode", scenario_name;
  double t_end = 0.0, q_min = 0.0, q_max = 0.0;
  int points = 60, n_min = 3, n_max = 50;
  bool log_spacing = false;

  auto* sim = app.add_subcommand("simulate", "Integrate one engine and write the trajectory");
  sim->add_option("--config", config_path)->required();
  sim->add_option("--engine", engine)->check(CLI::IsMember({"ode", "rtm"}));
  sim->add_option("--t-end", t_end);
  sim->add_option("--out", out_dir)->required();

  auto* eq = app.add_subcommand("equilibria", "Equilibrium points, spectra and stability");
  eq->add_option("--config", config_path)->required();
  eq->add_option("--out", out_dir)->required();

  auto* swq = app.add_subcommand("sweep-q", "Flow sweep with both engines");
  swq->add_option("--config", config_path)->required();
  swq->add_option("--q-min", q_min)->required();
  swq->add_option("--q-max", q_max)->required();
  swq->add_option("--points", points);
  swq->add_flag("--log", log_spacing);
  swq->add_option("--out", out_dir)->required();

  auto* swn = app.add_subcommand("sweep-cells", "Cell-count sweep with both engines");
  swn->add_option("--config", config_path)->required();
  swn->add_option("--n-min", n_min);
  swn->add_option("--n-max", n_max);
  swn->add_option("--out", out_dir)->required();

  auto* sc = app.add_subcommand("scenario", "Run a preset experiment end to end");
  sc->add_option("--name", scenario_name)->required()->check(CLI::IsMember({"A", "B", "C", "D"}));
  sc->add_option("--out", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors collapse to exit 1
  }

  if (sim->parsed()) {
    const std::string text = read_file(config_path);
    RunSetup setup = parse_config(text);
    Emitter em(out_dir, argc, argv);
    em.manifest.config_digest = config_digest(serialize_config(setup));
    if (t_end > 0.0) {
      setup.ode.t_max = t_end;
      setup.rtm.t_max = t_end;
    }
    std::vector<NetworkState> traj;
    if (engine == "ode")
      traj = thin(integrate(setup.cfg, setup.ode), 2000);
    else
      traj = rtm_trajectory(setup, setup.rtm.t_max > 0.0
                                       ? setup.rtm.t_max
                                       : 100.0 / setup.cfg.min_dilution());
    em.emit("trajectory.csv", trajectory_csv(traj, setup.cfg));
    em.finish();
  } else if (eq->parsed()) {
    const RunSetup setup = parse_config(read_file(config_path));
    Emitter em(out_dir, argc, argv);
    em.manifest.config_digest = config_digest(serialize_config(setup));
    em.emit("equilibria.csv", equilibria_csv(setup));
    em.finish();
  } else if (swq->parsed()) {
    const RunSetup setup = parse_config(read_file(config_path));
    if (!(q_min > 0.0) || !(q_max >= q_min)) throw ConfigError("need 0 < q-min <= q-max");
    Emitter em(out_dir, argc, argv);
    em.manifest.config_digest = config_digest(serialize_config(setup));
    std::vector<double> grid;
    if (log_spacing)
      grid = log_grid(q_min, q_max, points);
    else
      for (int i = 0; i < points; ++i)
        grid.push_back(points == 1 ? q_min : q_min + (q_max - q_min) * i / (points - 1));
    const auto table = sweep_flow(setup, grid);
    em.emit("sweep_q.csv", sweep_csv(table));
    em.emit("delta_q.svg",
            render_plot(table, PlotSpec{"param", {"delta"}, log_spacing, false,
                                        "Engine divergence vs flow"}));
    em.finish();
  } else if (swn->parsed()) {
    const RunSetup setup = parse_config(read_file(config_path));
    Emitter em(out_dir, argc, argv);
    em.manifest.config_digest = config_digest(serialize_config(setup));
    std::vector<int> grid;
    for (int n = n_min; n <= n_max; ++n) grid.push_back(n);
    const auto table = sweep_cells(setup, grid);
    em.emit("sweep_cells.csv", sweep_csv(table));
    em.emit("delta_cells.svg",
            render_plot(table, PlotSpec{"param", {"delta"}, false, false,
                                        "Engine divergence vs cell count"}));
    em.finish();
  } else if (sc->parsed()) {
    const ScenarioPlan plan = scenario(scenario_name);
    Emitter em(out_dir, argc, argv);
    em.manifest.config_digest = config_digest(serialize_config(plan.setup));
    em.emit("config.json", serialize_config(plan.setup));
    const auto table = run_scenario(plan);
    switch (plan.kind) {
      case ScenarioPlan::Kind::FlowSweep:
        em.emit("sweep_q.csv", sweep_csv(table));
        em.emit("delta_q.svg",
                render_plot(table, PlotSpec{"param", {"delta"}, true, false,
                                            "Scenario " + plan.name + ": divergence vs flow"}));
        break;
      case ScenarioPlan::Kind::CellSweep:
        em.emit("sweep_cells.csv", sweep_csv(table));
        em.emit("delta_cells.svg",
                render_plot(table,
                            PlotSpec{"param", {"delta"}, false, false,
                                     "Scenario " + plan.name + ": divergence vs cell count"}));
        break;
      case ScenarioPlan::Kind::CellProfile:
        em.emit("steady_cells.csv", sweep_csv(table));
        em.emit("profile.svg",
                render_plot(table,
                            PlotSpec{"cell", {"S_ode", "S_rtm"}, false, false,
                                     "Scenario " + plan.name + ": steady profile"}));
        break;
    }
    em.finish();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
