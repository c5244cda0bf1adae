#ifndef GRADOLAB_NETWORK_HPP
#define GRADOLAB_NETWORK_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradolab/kinetics.hpp"

namespace gradolab {

/// Raised when a configuration violates a structural invariant.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on numerical failure (step-size underflow, singular system, ...).
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

struct Species {
  std::string name;
  MonodKinetics kinetics;
  double yield_k = 1.0;  // mol biomass per mol substrate
};

struct Reactor {
  double volume = 0.0;  // l
};

/// Concentration vector for the whole chain at one instant.
/// Layout: cell-major, [S, B_1, ..., B_m] per cell, flow order.
struct NetworkState {
  double time = 0.0;  // s
  Eigen::VectorXd c;

  double substrate(int cell, int n_species) const { return c[cell * (1 + n_species)]; }
  double biomass(int cell, int species, int n_species) const {
    return c[cell * (1 + n_species) + 1 + species];
  }
  double& substrate(int cell, int n_species) { return c[cell * (1 + n_species)]; }
  double& biomass(int cell, int species, int n_species) {
    return c[cell * (1 + n_species) + 1 + species];
  }
};

/// A chain of reactors in series, flow order: cell 0 takes the feed,
/// cell n-1 discharges.
struct NetworkConfig {
  std::vector<Reactor> reactors;
  double flow_q = 0.0;  // l/s
  double s_in = 0.0;    // mol/l
  std::vector<Species> species;
  NetworkState initial;

  int n_cells() const { return static_cast<int>(reactors.size()); }
  int n_species() const { return static_cast<int>(species.size()); }
  int dimension() const { return n_cells() * (1 + n_species()); }
  double dilution(int cell) const { return flow_q / reactors[cell].volume; }
  double min_dilution() const;
};

/// Checks every structural invariant; throws ConfigError listing all
/// violations. Returns the config unchanged when valid.
const NetworkConfig& validate_network(const NetworkConfig& cfg);

}  // namespace gradolab

#endif  // GRADOLAB_NETWORK_HPP
