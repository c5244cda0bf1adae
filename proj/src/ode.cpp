#include "gradolab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gradolab {

void rhs_into(const Eigen::VectorXd& c, const NetworkConfig& cfg, Eigen::VectorXd& out) {
  const int n = cfg.n_cells();
  const int m = cfg.n_species();
  const int stride = 1 + m;
  out.resize(c.size());
  for (int i = 0; i < n; ++i) {
    const double d = cfg.dilution(i);
    const double s = c[i * stride];
    const double s_up = (i == 0) ? cfg.s_in : c[(i - 1) * stride];
    double consumption = 0.0;
    for (int j = 0; j < m; ++j) {
      const auto& sp = cfg.species[j];
      const double mu = monod_rate(s, sp.kinetics);
      const double b = c[i * stride + 1 + j];
      const double b_up = (i == 0) ? 0.0 : c[(i - 1) * stride + 1 + j];
      consumption += mu * b / sp.yield_k;
      out[i * stride + 1 + j] = (mu - d) * b + d * b_up;
    }
    out[i * stride] = -consumption + d * (s_up - s);
  }
}

Eigen::VectorXd rhs(const NetworkState& state, const NetworkConfig& cfg) {
  if (state.c.size() != cfg.dimension())
    throw ConfigError("rhs: state dimension does not match configuration");
  Eigen::VectorXd out;
  rhs_into(state.c, cfg, out);
  return out;
}

namespace detail {

double effective_t_max(const NetworkConfig& cfg, const IntegratorOptions& opts) {
  if (opts.t_max > 0.0) return opts.t_max;
  return 100.0 / cfg.min_dilution();
}

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // 4th-order weights for the embedded error estimate.
  static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                          e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;
};

// Advances y in place until t reaches t_end or the observer returns false.
// The observer sees (t, y, f(y)) after every accepted step.
template <class Observer>
void integrate_adaptive(const NetworkConfig& cfg, const IntegratorOptions& opts, double t_end,
                        double& t, Eigen::VectorXd& y, Observer&& observe) {
  using T = Dopri5;
  const int dim = static_cast<int>(y.size());
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  Eigen::VectorXd ytmp(dim), y5(dim), err(dim);

  double dt = std::min(opts.dt_init, opts.dt_max);
  const double dt_floor = 1e-3 * opts.dt_init;
  rhs_into(y, cfg, k1);

  while (t < t_end) {
    dt = std::min(dt, t_end - t);
    // trial stages can dip infinitesimally below zero around components
    // sitting exactly at zero; the rate law is evaluated on the projection
    // onto the nonnegative orthant so such excursions cost nothing
    ytmp = (y + dt * T::a21 * k1).cwiseMax(0.0);
    rhs_into(ytmp, cfg, k2);
    ytmp = (y + dt * (T::a31 * k1 + T::a32 * k2)).cwiseMax(0.0);
    rhs_into(ytmp, cfg, k3);
    ytmp = (y + dt * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3)).cwiseMax(0.0);
    rhs_into(ytmp, cfg, k4);
    ytmp = (y + dt * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4)).cwiseMax(0.0);
    rhs_into(ytmp, cfg, k5);
    ytmp = (y + dt * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5))
               .cwiseMax(0.0);
    rhs_into(ytmp, cfg, k6);
    y5 = y + dt * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
    rhs_into(y5.cwiseMax(0.0).eval(), cfg, k7);
    err = y5 - (y + dt * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 +
                          T::e7 * k7));

    double err_norm = 0.0;
    bool negative = false;
    for (int i = 0; i < dim; ++i) {
      const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err_norm += (err[i] / scale) * (err[i] / scale);
      // a dip below zero larger than the permitted local error is a real
      // overshoot and rejects the step; anything smaller rounds to zero
      if (y5[i] < -scale) negative = true;
    }
    err_norm = std::sqrt(err_norm / dim);

    if (err_norm <= 1.0 && !negative) {
      t += dt;
      y = y5;
      for (int i = 0; i < dim; ++i)
        if (y[i] < 1e-30) y[i] = 0.0;
      rhs_into(y, cfg, k1);  // snapped state, so no FSAL reuse of k7
      if (!observe(t, y, k1)) return;
      const double factor = 0.9 * std::pow(std::max(err_norm, 1e-10), -0.2);
      dt = std::min(dt * std::clamp(factor, 0.2, 5.0), opts.dt_max);
    } else {
      dt *= negative ? 0.5 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.9);
      if (dt < dt_floor) {
        std::ostringstream os;
        os << "ODE step size underflow at t = " << t << " s (dt = " << dt << " s)";
        throw NumericsError(os.str());
      }
    }
  }
}

template <class Observer>
void integrate_rk4(const NetworkConfig& cfg, const IntegratorOptions& opts, double t_end,
                   double& t, Eigen::VectorXd& y, Observer&& observe) {
  const int dim = static_cast<int>(y.size());
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), ytmp(dim), f(dim);
  while (t < t_end) {
    const double dt = std::min(opts.dt_init, t_end - t);
    rhs_into(y, cfg, k1);
    ytmp = y + 0.5 * dt * k1;
    rhs_into(ytmp, cfg, k2);
    ytmp = y + 0.5 * dt * k2;
    rhs_into(ytmp, cfg, k3);
    ytmp = y + dt * k3;
    rhs_into(ytmp, cfg, k4);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    y = y.cwiseMax(0.0);
    t += dt;
    rhs_into(y, cfg, f);
    if (!observe(t, y, f)) return;
  }
}

template <class Observer>
void run(const NetworkConfig& cfg, const IntegratorOptions& opts, double t_end, double& t,
         Eigen::VectorXd& y, Observer&& observe) {
  if (opts.method == OdeMethod::Rk4Fixed)
    integrate_rk4(cfg, opts, t_end, t, y, observe);
  else
    integrate_adaptive(cfg, opts, t_end, t, y, observe);
}

}  // namespace detail

std::vector<NetworkState> integrate(const NetworkConfig& cfg, const IntegratorOptions& opts) {
  validate_network(cfg);
  const double t_end = detail::effective_t_max(cfg, opts);
  std::vector<NetworkState> traj;
  traj.push_back(cfg.initial);
  double t = cfg.initial.time;
  Eigen::VectorXd y = cfg.initial.c;
  detail::run(cfg, opts, t_end, t, y,
              [&](double tt, const Eigen::VectorXd& yy, const Eigen::VectorXd&) {
                traj.push_back(NetworkState{tt, yy});
                return true;
              });
  return traj;
}

SteadyStateReport find_steady_state(const NetworkConfig& cfg, const IntegratorOptions& opts,
                                    double ss_tol) {
  validate_network(cfg);
  const double t_end = detail::effective_t_max(cfg, opts);
  SteadyStateReport rep;
  double t = cfg.initial.time;
  Eigen::VectorXd y = cfg.initial.c;

  Eigen::VectorXd f0;
  rhs_into(y, cfg, f0);
  rep.residual_norm = f0.lpNorm<Eigen::Infinity>();
  rep.converged = rep.residual_norm < ss_tol * std::max(1.0, y.lpNorm<Eigen::Infinity>());

  if (!rep.converged) {
    detail::run(cfg, opts, t_end, t, y,
                [&](double, const Eigen::VectorXd& yy, const Eigen::VectorXd& f) {
                  rep.residual_norm = f.lpNorm<Eigen::Infinity>();
                  rep.converged =
                      rep.residual_norm < ss_tol * std::max(1.0, yy.lpNorm<Eigen::Infinity>());
                  return !rep.converged;
                });
  }
  rep.state = NetworkState{t, y};
  rep.elapsed_model_time = t - cfg.initial.time;
  return rep;
}

}  // namespace gradolab
