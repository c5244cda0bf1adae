#include "gradolab/network.hpp"

#include <algorithm>
#include <sstream>

namespace gradolab {

double NetworkConfig::min_dilution() const {
  double vmax = 0.0;
  for (const auto& r : reactors) vmax = std::max(vmax, r.volume);
  return flow_q / vmax;
}

const NetworkConfig& validate_network(const NetworkConfig& cfg) {
  std::vector<std::string> errs;

  if (cfg.reactors.empty()) errs.push_back("at least one reactor required");
  for (size_t i = 0; i < cfg.reactors.size(); ++i) {
    if (!(cfg.reactors[i].volume > 0.0)) {
      std::ostringstream os;
      os << "reactor " << i + 1 << ": volume must be positive";
      errs.push_back(os.str());
    }
  }
  if (!(cfg.flow_q > 0.0)) errs.push_back("flow must be positive");
  if (!(cfg.s_in >= 0.0)) errs.push_back("s_in must be nonnegative");

  if (cfg.species.empty()) errs.push_back("at least one species required");
  for (size_t j = 0; j < cfg.species.size(); ++j) {
    const auto& sp = cfg.species[j];
    std::ostringstream os;
    os << "species " << (sp.name.empty() ? std::to_string(j + 1) : sp.name);
    const std::string tag = os.str();
    if (!(sp.kinetics.mu_max > 0.0)) errs.push_back(tag + ": mu_max must be positive");
    if (!(sp.kinetics.k_s > 0.0)) errs.push_back(tag + ": k_s must be positive");
    if (!(sp.yield_k > 0.0)) errs.push_back(tag + ": yield must be positive");
  }
  for (size_t j = 0; j < cfg.species.size(); ++j)
    for (size_t l = j + 1; l < cfg.species.size(); ++l)
      if (cfg.species[j].name == cfg.species[l].name)
        errs.push_back("species names must be distinct: \"" + cfg.species[j].name + "\"");

  const int dim = cfg.dimension();
  if (cfg.initial.c.size() != dim) {
    std::ostringstream os;
    os << "initial state has dimension " << cfg.initial.c.size() << ", expected "
       << cfg.n_cells() << " cells x (1 + " << cfg.n_species() << " species) = " << dim;
    errs.push_back(os.str());
  } else {
    for (int i = 0; i < dim; ++i) {
      if (!(cfg.initial.c[i] >= 0.0)) {
        errs.push_back("initial concentrations must be nonnegative");
        break;
      }
    }
  }

  if (!errs.empty()) {
    std::ostringstream os;
    os << "invalid network configuration:";
    for (const auto& e : errs) os << "\n  - " << e;
    throw ConfigError(os.str());
  }
  return cfg;
}

}  // namespace gradolab
