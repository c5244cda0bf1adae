#include "gradolab/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace gradolab {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Washout: return "Washout";
    case Outcome::Survival: return "Survival";
    case Outcome::Winner1: return "Winner1";
    case Outcome::Winner2: return "Winner2";
    case Outcome::Coexistence: return "Coexistence";
    case Outcome::TotalWashout: return "TotalWashout";
  }
  return "?";
}

std::vector<Outcome> competition_outcome(const NetworkState& ss, const NetworkConfig& cfg,
                                         double extinction_threshold) {
  if (!(extinction_threshold > 0.0))
    throw std::invalid_argument("competition_outcome: threshold must be positive");
  const int m = cfg.n_species();
  if (m != 1 && m != 2)
    throw ConfigError("competition_outcome: defined for one or two species");
  std::vector<Outcome> out;
  for (int i = 0; i < cfg.n_cells(); ++i) {
    if (m == 1) {
      out.push_back(ss.biomass(i, 0, m) >= extinction_threshold ? Outcome::Survival
                                                                : Outcome::Washout);
    } else {
      const bool a = ss.biomass(i, 0, m) >= extinction_threshold;
      const bool b = ss.biomass(i, 1, m) >= extinction_threshold;
      out.push_back(a && b ? Outcome::Coexistence
                           : a ? Outcome::Winner1
                               : b ? Outcome::Winner2 : Outcome::TotalWashout);
    }
  }
  return out;
}

double delta_indicator(const NetworkState& ss_ode, const NetworkState& ss_rtm, int cell,
                       int n_species) {
  if (ss_ode.c.size() != ss_rtm.c.size())
    throw std::invalid_argument("delta_indicator: states have different dimensions");
  const int idx = cell * (1 + n_species);
  if (cell < 0 || idx >= ss_ode.c.size())
    throw std::out_of_range("delta_indicator: cell index out of range");
  return std::abs(ss_rtm.c[idx] - ss_ode.c[idx]);
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g;
  if (points == 1) return {lo};
  const double r = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) g.push_back(lo * std::exp(r * i));
  g.back() = hi;
  return g;
}

namespace {

int worker_count() {
  if (const char* env = std::getenv("GRADOLAB_THREADS")) {
    const int k = std::atoi(env);
    if (k > 0) return k;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count), at most worker_count() at a time.
// Results land by index, so assembly order is deterministic.
template <class Fn>
void parallel_for(int count, Fn&& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

SweepRow run_row(const RunSetup& setup, double param, const std::vector<int>& tracked) {
  SweepRow row;
  row.param = param;
  const NetworkConfig& cfg = setup.cfg;
  const int m = cfg.n_species();

  NetworkState ss_ode, ss_rtm;
  std::vector<Outcome> out_ode, out_rtm;
  try {
    auto rep = find_steady_state(cfg, setup.ode, setup.ode_ss_tol);
    ss_ode = rep.state;
    row.conv_ode = rep.converged;
    out_ode = competition_outcome(ss_ode, cfg, setup.extinction_threshold);
    row.ok_ode = true;
  } catch (const std::exception& e) {
    row.error += std::string("ode: ") + e.what();
  }
  try {
    auto [rep, diag] = rtm_run_to_steady(cfg, setup.rtm);
    ss_rtm = rep.state;
    row.conv_rtm = rep.converged;
    out_rtm = competition_outcome(ss_rtm, cfg, setup.extinction_threshold);
    row.ok_rtm = true;
  } catch (const std::exception& e) {
    if (!row.error.empty()) row.error += "; ";
    row.error += std::string("rtm: ") + e.what();
  }

  for (int cell : tracked) {
    SweepCellResult res;
    res.cell = cell;
    if (row.ok_ode) {
      res.s_ode = ss_ode.substrate(cell, m);
      res.b_ode.resize(m);
      for (int j = 0; j < m; ++j) res.b_ode[j] = ss_ode.biomass(cell, j, m);
      res.out_ode = out_ode[cell];
    }
    if (row.ok_rtm) {
      res.s_rtm = ss_rtm.substrate(cell, m);
      res.b_rtm.resize(m);
      for (int j = 0; j < m; ++j) res.b_rtm[j] = ss_rtm.biomass(cell, j, m);
      res.out_rtm = out_rtm[cell];
    }
    if (row.ok_ode && row.ok_rtm) res.delta = delta_indicator(ss_ode, ss_rtm, cell, m);
    row.cells.push_back(std::move(res));
  }
  return row;
}

std::vector<std::string> species_names(const NetworkConfig& cfg) {
  std::vector<std::string> names;
  for (size_t j = 0; j < cfg.species.size(); ++j)
    names.push_back(cfg.species[j].name.empty() ? "B" + std::to_string(j + 1)
                                                : cfg.species[j].name);
  return names;
}

}  // namespace

SweepTable sweep_flow(const RunSetup& setup, const std::vector<double>& q_grid,
                      const std::vector<int>& tracked_cells) {
  validate_network(setup.cfg);
  for (double q : q_grid)
    if (!(q > 0.0)) throw std::invalid_argument("sweep_flow: flow values must be positive");

  std::vector<double> grid = q_grid;
  std::sort(grid.begin(), grid.end());
  std::vector<int> tracked = tracked_cells;
  if (tracked.empty()) tracked = {0, setup.cfg.n_cells() - 1};

  SweepTable table;
  table.param_name = "Q";
  table.species_names = species_names(setup.cfg);
  table.rows.resize(grid.size());

  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    RunSetup local = setup;
    local.cfg.flow_q = grid[i];
    table.rows[i] = run_row(local, grid[i], tracked);
  });
  return table;
}

SweepTable sweep_cells(const RunSetup& setup, const std::vector<int>& n_grid) {
  validate_network(setup.cfg);
  for (int n : n_grid)
    if (n < 3) throw std::invalid_argument("sweep_cells: at least three cells per row");

  std::vector<int> grid = n_grid;
  std::sort(grid.begin(), grid.end());

  double v_total = 0.0;
  for (const auto& r : setup.cfg.reactors) v_total += r.volume;
  const int m = setup.cfg.n_species();
  Eigen::VectorXd cell0 = setup.cfg.initial.c.head(1 + m);

  SweepTable table;
  table.param_name = "n";
  table.species_names = species_names(setup.cfg);
  table.rows.resize(grid.size());

  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    const int n = grid[i];
    RunSetup local = setup;
    local.cfg.reactors.assign(n, Reactor{v_total / n});
    local.cfg.initial.c.resize(n * (1 + m));
    for (int cell = 0; cell < n; ++cell) local.cfg.initial.c.segment(cell * (1 + m), 1 + m) = cell0;
    table.rows[i] = run_row(local, static_cast<double>(n), {0, n - 1});
  });
  return table;
}

SweepTable run_profile(const RunSetup& setup) {
  validate_network(setup.cfg);
  std::vector<int> tracked(setup.cfg.n_cells());
  for (int i = 0; i < setup.cfg.n_cells(); ++i) tracked[i] = i;

  SweepTable table;
  table.param_name = "Q";
  table.species_names = species_names(setup.cfg);
  table.rows.push_back(run_row(setup, setup.cfg.flow_q, tracked));
  return table;
}

namespace {

NetworkState uniform_initial(int n, const std::vector<double>& cell) {
  NetworkState st;
  const int stride = static_cast<int>(cell.size());
  st.c.resize(n * stride);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < stride; ++j) st.c[i * stride + j] = cell[j];
  return st;
}

}  // namespace

ScenarioPlan scenario(ScenarioId id) {
  ScenarioPlan plan;
  RunSetup& s = plan.setup;
  switch (id) {
    case ScenarioId::A: {
      // single-species flow sweep around the washout threshold Q* = 1e-5
      plan.name = "A";
      plan.kind = ScenarioPlan::Kind::FlowSweep;
      s.cfg.reactors.assign(3, Reactor{1.0 / 3.0});
      s.cfg.flow_q = 6e-6;
      s.cfg.s_in = 3.0;
      s.cfg.species = {Species{"B", {4e-5, 1.0}, 1.0}};
      s.cfg.initial = uniform_initial(3, {5.0, 2.0});
      s.ode.t_max = 1e8;
      s.ode_ss_tol = 1e-13;
      s.rtm.ss_tol = 1e-11;
      s.rtm.t_max = 1e8;
      plan.q_grid = log_grid(1e-6, 2e-5, 60);
      break;
    }
    case ScenarioId::B: {
      // single-species cell-count sweep; survival iff 75/(2n) > 1
      plan.name = "B";
      plan.kind = ScenarioPlan::Kind::CellSweep;
      s.cfg.reactors.assign(3, Reactor{1.0 / 3.0});
      s.cfg.flow_q = 1e-5;
      s.cfg.s_in = 3.0;
      s.cfg.species = {Species{"B", {5e-4, 1.0}, 1.0}};
      s.cfg.initial = uniform_initial(3, {5.0, 2.0});
      s.ode.t_max = 1e8;
      s.ode_ss_tol = 1e-13;
      s.rtm.ss_tol = 1e-11;
      s.rtm.t_max = 3e7;
      for (int n = 3; n <= 50; ++n) plan.n_grid.push_back(n);
      break;
    }
    case ScenarioId::C: {
      // two competitors in one tank; winner switches at Q = 2e-4
      plan.name = "C";
      plan.kind = ScenarioPlan::Kind::FlowSweep;
      s.cfg.reactors.assign(1, Reactor{1.0 / 3.0});
      s.cfg.flow_q = 2e-4;
      s.cfg.s_in = 20.0;
      s.cfg.species = {Species{"B1", {1e-3, 5.0}, 1.0}, Species{"B2", {3e-3, 30.0}, 1.0}};
      s.cfg.initial = uniform_initial(1, {5.0, 2.0, 3.0});
      s.ode.t_max = 1e8;
      s.ode_ss_tol = 1e-13;
      s.rtm.ss_tol = 1e-11;
      s.rtm.t_max = 3e7;
      plan.q_grid = log_grid(1e-5, 1e-3, 60);
      break;
    }
    case ScenarioId::D: {
      // twenty heterogeneous tanks in series, two competitors
      plan.name = "D";
      plan.kind = ScenarioPlan::Kind::CellProfile;
      std::vector<double> vols = {10e-2, 9e-2, 1e-2, 11e-2, 9e-2};
      vols.insert(vols.end(), 15, 4e-2);
      for (double v : vols) s.cfg.reactors.push_back(Reactor{v});
      s.cfg.flow_q = 0.3587e-5;
      s.cfg.s_in = 19.25;
      s.cfg.species = {Species{"B1", {4.629e-5, 6.0}, 1.0}, Species{"B2", {6.944e-5, 18.0}, 1.0}};
      s.cfg.initial = uniform_initial(20, {5.0, 2.0, 3.0});
      // the first species transiently washes below the extinction threshold
      // in the mid-chain tanks before re-invading; the pattern settles only
      // around t ~ 5e8 s, so the horizon is generous and the implicit step
      // cap is raised to keep that horizon affordable
      s.ode.t_max = 1e9;
      s.ode_ss_tol = 1e-10;
      s.rtm.ss_tol = 1e-10;
      s.rtm.t_max = 1e9;
      s.rtm.dt_max = 864.0;
      break;
    }
  }
  return plan;
}

ScenarioPlan scenario(const std::string& name) {
  if (name == "A") return scenario(ScenarioId::A);
  if (name == "B") return scenario(ScenarioId::B);
  if (name == "C") return scenario(ScenarioId::C);
  if (name == "D") return scenario(ScenarioId::D);
  throw ConfigError("unknown scenario '" + name + "' (expected A, B, C or D)");
}

SweepTable run_scenario(const ScenarioPlan& plan) {
  switch (plan.kind) {
    case ScenarioPlan::Kind::FlowSweep: return sweep_flow(plan.setup, plan.q_grid);
    case ScenarioPlan::Kind::CellSweep: return sweep_cells(plan.setup, plan.n_grid);
    case ScenarioPlan::Kind::CellProfile: return run_profile(plan.setup);
  }
  throw std::logic_error("run_scenario: unknown kind");
}

}  // namespace gradolab
