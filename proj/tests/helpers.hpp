#ifndef GRADOLAB_TEST_HELPERS_HPP
#define GRADOLAB_TEST_HELPERS_HPP

#include <random>
#include <vector>

#include "gradolab/network.hpp"

namespace gradolab::testing {

inline NetworkState uniform_state(int n, const std::vector<double>& cell) {
  NetworkState st;
  const int stride = static_cast<int>(cell.size());
  st.c.resize(n * stride);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < stride; ++j) st.c[i * stride + j] = cell[j];
  return st;
}

/// One reactor, one species.
inline NetworkConfig single_cell(double mu_max, double k_s, double yield, double volume, double q,
                                 double s_in, double s0, double b0) {
  NetworkConfig cfg;
  cfg.reactors = {Reactor{volume}};
  cfg.flow_q = q;
  cfg.s_in = s_in;
  cfg.species = {Species{"B", {mu_max, k_s}, yield}};
  cfg.initial = uniform_state(1, {s0, b0});
  return cfg;
}

/// Three reactors of 1/3 l each, the single-species reference chain:
/// mu_max 4e-5, k_s 1, S_in 3, start (5, 2).
inline NetworkConfig reference_chain(double q) {
  NetworkConfig cfg;
  cfg.reactors.assign(3, Reactor{1.0 / 3.0});
  cfg.flow_q = q;
  cfg.s_in = 3.0;
  cfg.species = {Species{"B", {4e-5, 1.0}, 1.0}};
  cfg.initial = uniform_state(3, {5.0, 2.0});
  return cfg;
}

/// One reactor of 1/3 l, the two-competitor reference tank:
/// mu1 = 1e-3 S/(5+S), mu2 = 3e-3 S/(30+S), S_in 20, start (5, 2, 3).
inline NetworkConfig competition_tank(double q) {
  NetworkConfig cfg;
  cfg.reactors = {Reactor{1.0 / 3.0}};
  cfg.flow_q = q;
  cfg.s_in = 20.0;
  cfg.species = {Species{"B1", {1e-3, 5.0}, 1.0}, Species{"B2", {3e-3, 30.0}, 1.0}};
  cfg.initial = uniform_state(1, {5.0, 2.0, 3.0});
  return cfg;
}

inline double log_uniform(std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

inline double uniform(std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng);
}

}  // namespace gradolab::testing

#endif  // GRADOLAB_TEST_HELPERS_HPP
