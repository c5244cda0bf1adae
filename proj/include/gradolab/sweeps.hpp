#ifndef GRADOLAB_SWEEPS_HPP
#define GRADOLAB_SWEEPS_HPP

#include <string>
#include <vector>

#include "gradolab/network.hpp"
#include "gradolab/ode.hpp"
#include "gradolab/rtm.hpp"

namespace gradolab {

/// Everything needed to run both engines on one network.
struct RunSetup {
  NetworkConfig cfg;
  IntegratorOptions ode;
  double ode_ss_tol = 1e-10;
  RtmOptions rtm;
  double extinction_threshold = 1e-6;  // mol/l
};

enum class Outcome { Washout, Survival, Winner1, Winner2, Coexistence, TotalWashout };

std::string to_string(Outcome o);

/// Outcome label per cell from steady biomass against the extinction
/// threshold. Defined for one- and two-species networks.
std::vector<Outcome> competition_outcome(const NetworkState& ss, const NetworkConfig& cfg,
                                         double extinction_threshold);

/// |S_rtm - S_ode| at one cell (0-based).
double delta_indicator(const NetworkState& ss_ode, const NetworkState& ss_rtm, int cell,
                       int n_species);

struct SweepCellResult {
  int cell = 0;  // 0-based
  double s_ode = 0.0, s_rtm = 0.0;
  Eigen::VectorXd b_ode, b_rtm;
  double delta = 0.0;
  Outcome out_ode = Outcome::Washout, out_rtm = Outcome::Washout;
};

struct SweepRow {
  double param = 0.0;
  bool ok_ode = false, ok_rtm = false;          // engine completed without error
  bool conv_ode = false, conv_rtm = false;      // steady-state tolerance reached
  std::string error;
  std::vector<SweepCellResult> cells;
};

struct SweepTable {
  std::string param_name;
  std::vector<std::string> species_names;
  std::vector<SweepRow> rows;  // sorted by param
};

/// One row per flow value: both engines run to steady state on cfg with
/// flow_q replaced. Per-row failures are recorded in the row. Rows are
/// independent and may execute concurrently (GRADOLAB_THREADS caps the
/// worker count).
SweepTable sweep_flow(const RunSetup& setup, const std::vector<double>& q_grid,
                      const std::vector<int>& tracked_cells = {});

/// One row per cell count n >= 3: the chain is rebuilt with V_i = V/n
/// (V the total volume of setup.cfg) and the per-cell initial state of
/// cell 0 replicated.
SweepTable sweep_cells(const RunSetup& setup, const std::vector<int>& n_grid);

/// Both engines once on setup.cfg, all cells tracked; single-row table.
SweepTable run_profile(const RunSetup& setup);

enum class ScenarioId { A, B, C, D };

struct ScenarioPlan {
  std::string name;
  RunSetup setup;
  enum class Kind { FlowSweep, CellSweep, CellProfile } kind;
  std::vector<double> q_grid;  // FlowSweep
  std::vector<int> n_grid;     // CellSweep
};

/// The four preset experiments (SI units).
ScenarioPlan scenario(ScenarioId id);
ScenarioPlan scenario(const std::string& name);

/// Executes a plan (sweep or profile).
SweepTable run_scenario(const ScenarioPlan& plan);

/// Log-spaced grid, endpoints included.
std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace gradolab

#endif  // GRADOLAB_SWEEPS_HPP
