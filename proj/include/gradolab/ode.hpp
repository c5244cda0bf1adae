#ifndef GRADOLAB_ODE_HPP
#define GRADOLAB_ODE_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "gradolab/network.hpp"

namespace gradolab {

enum class OdeMethod { Rk4Fixed, Rk45Adaptive };

struct IntegratorOptions {
  OdeMethod method = OdeMethod::Rk45Adaptive;
  double dt_init = 1.0;   // s
  double dt_max = 1e6;    // s
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;  // mol/l
  double t_max = 0.0;      // s; 0 means 100 / D_min
};

struct SteadyStateReport {
  NetworkState state;
  double residual_norm = 0.0;  // mol/(l*s), inf-norm of rhs
  bool converged = false;
  double elapsed_model_time = 0.0;  // s
};

/// Time derivative of the series-chemostat system.
/// Cell i: dS_i/dt = -sum_j mu_j(S_i) B_{j,i} / k_j + D_i (S_{i-1} - S_i),
///         dB_{j,i}/dt = (mu_j(S_i) - D_i) B_{j,i} + D_i B_{j,i-1},
/// with feed S_0 = S_in, B_{j,0} = 0 and D_i = Q / V_i.
Eigen::VectorXd rhs(const NetworkState& state, const NetworkConfig& cfg);

/// In-place variant, no allocation.
void rhs_into(const Eigen::VectorXd& c, const NetworkConfig& cfg, Eigen::VectorXd& out);

/// Integrates from cfg.initial to opts.t_max, recording every accepted step.
std::vector<NetworkState> integrate(const NetworkConfig& cfg, const IntegratorOptions& opts);

/// Integrates until the rhs inf-norm drops below ss_tol * max(1, |state|_inf)
/// or t_max is reached; the converged flag reports which happened.
SteadyStateReport find_steady_state(const NetworkConfig& cfg, const IntegratorOptions& opts,
                                    double ss_tol = 1e-10);

namespace detail {
/// Resolved integration horizon: opts.t_max, or 100 / D_min when zero.
double effective_t_max(const NetworkConfig& cfg, const IntegratorOptions& opts);
}  // namespace detail

}  // namespace gradolab

#endif  // GRADOLAB_ODE_HPP
