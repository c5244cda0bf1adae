#ifndef GRADOLAB_CSV_HPP
#define GRADOLAB_CSV_HPP

#include <string>
#include <vector>

#include "gradolab/sweeps.hpp"

namespace gradolab {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Sweep CSV: one data row per (parameter value, tracked cell). Columns:
/// param, cell, S_ode, B_<name>_ode..., S_rtm, B_<name>_rtm..., delta,
/// outcome_ode, outcome_rtm, converged_ode, converged_rtm.
/// Fields of a failed engine are left empty.
std::string sweep_csv(const SweepTable& table);

/// Trajectory CSV: time, then S and per-species B for every cell.
std::string trajectory_csv(const std::vector<NetworkState>& traj, const NetworkConfig& cfg);

void write_file(const std::string& path, const std::string& contents);

}  // namespace gradolab

#endif  // GRADOLAB_CSV_HPP
