#include "gradolab/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace gradolab {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream os;
  os << "param,cell";
  os << ",S_ode";
  for (const auto& name : table.species_names) os << ",B_" << name << "_ode";
  os << ",S_rtm";
  for (const auto& name : table.species_names) os << ",B_" << name << "_rtm";
  os << ",delta,outcome_ode,outcome_rtm,converged_ode,converged_rtm\n";

  for (const auto& row : table.rows) {
    for (const auto& cell : row.cells) {
      os << format_double(row.param) << "," << (cell.cell + 1);
      if (row.ok_ode) {
        os << "," << format_double(cell.s_ode);
        for (Eigen::Index j = 0; j < cell.b_ode.size(); ++j)
          os << "," << format_double(cell.b_ode[j]);
      } else {
        os << ",";
        for (size_t j = 0; j < table.species_names.size(); ++j) os << ",";
      }
      if (row.ok_rtm) {
        os << "," << format_double(cell.s_rtm);
        for (Eigen::Index j = 0; j < cell.b_rtm.size(); ++j)
          os << "," << format_double(cell.b_rtm[j]);
      } else {
        os << ",";
        for (size_t j = 0; j < table.species_names.size(); ++j) os << ",";
      }
      if (row.ok_ode && row.ok_rtm)
        os << "," << format_double(cell.delta);
      else
        os << ",";
      os << "," << (row.ok_ode ? to_string(cell.out_ode) : "");
      os << "," << (row.ok_rtm ? to_string(cell.out_rtm) : "");
      os << "," << (row.conv_ode ? "true" : "false");
      os << "," << (row.conv_rtm ? "true" : "false") << "\n";
    }
  }
  return os.str();
}

std::string trajectory_csv(const std::vector<NetworkState>& traj, const NetworkConfig& cfg) {
  const int n = cfg.n_cells();
  const int m = cfg.n_species();
  std::ostringstream os;
  os << "time";
  for (int i = 0; i < n; ++i) {
    os << ",S_" << (i + 1);
    for (int j = 0; j < m; ++j) {
      const std::string name =
          cfg.species[j].name.empty() ? "B" + std::to_string(j + 1) : cfg.species[j].name;
      os << ",B_" << name << "_" << (i + 1);
    }
  }
  os << "\n";
  for (const auto& st : traj) {
    os << format_double(st.time);
    for (Eigen::Index i = 0; i < st.c.size(); ++i) os << "," << format_double(st.c[i]);
    os << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace gradolab
