#ifndef GRADOLAB_SVG_HPP
#define GRADOLAB_SVG_HPP

#include <string>
#include <vector>

#include "gradolab/sweeps.hpp"

namespace gradolab {

struct PlotSpec {
  std::string x_column = "param";
  std::vector<std::string> y_columns;
  bool log_x = false;
  bool log_y = false;
  std::string title;
};

/// Standalone SVG line plot of sweep-table columns. Recognized column
/// names: param, S_ode, S_rtm, delta, B_<species>_ode, B_<species>_rtm.
/// One polyline per (y column, tracked cell); points missing a value
/// (failed engine, nonpositive on a log axis) are skipped.
/// Byte output is deterministic for identical input.
std::string render_plot(const SweepTable& table, const PlotSpec& spec);

}  // namespace gradolab

#endif  // GRADOLAB_SVG_HPP
