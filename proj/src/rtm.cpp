#include "gradolab/rtm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gradolab {

namespace {

void residual_into(const Eigen::VectorXd& c_new, const Eigen::VectorXd& c_old, double dt,
                   const NetworkConfig& cfg, const RtmOptions& opts, Eigen::VectorXd& out) {
  const int n = cfg.n_cells();
  const int m = cfg.n_species();
  const int stride = 1 + m;
  const double q = cfg.flow_q;
  out.resize(c_new.size());
  for (int j = 0; j < n; ++j) {
    const double v = cfg.reactors[j].volume;
    const int base = j * stride;
    const double s = c_new[base];
    const double s_up = (j == 0) ? cfg.s_in : c_new[base - stride];
    double consumption = 0.0;
    for (int i = 0; i < m; ++i) {
      const auto& sp = cfg.species[i];
      const double b = c_new[base + 1 + i];
      const double b_up = (j == 0) ? opts.inflow_biomass : c_new[base + 1 + i - stride];
      const double mu = monod_rate(s, sp.kinetics);
      consumption += mu * b / sp.yield_k;
      out[base + 1 + i] =
          v * (b - c_old[base + 1 + i]) / dt - q * (b_up - b) - v * mu * b;
    }
    out[base] = v * (s - c_old[base]) / dt - q * (s_up - s) + v * consumption;
  }
}

void jacobian_into(const Eigen::VectorXd& c_new, double dt, const NetworkConfig& cfg,
                   Eigen::MatrixXd& jac) {
  const int n = cfg.n_cells();
  const int m = cfg.n_species();
  const int stride = 1 + m;
  const double q = cfg.flow_q;
  jac.setZero();
  for (int j = 0; j < n; ++j) {
    const double v = cfg.reactors[j].volume;
    const int base = j * stride;
    const double s = c_new[base];
    double dsum = 0.0;
    for (int i = 0; i < m; ++i) {
      const auto& sp = cfg.species[i];
      const double b = c_new[base + 1 + i];
      const double mu = monod_rate(s, sp.kinetics);
      const double dmu = monod_rate_derivative(s, sp.kinetics);
      dsum += dmu * b / sp.yield_k;
      jac(base, base + 1 + i) = v * mu / sp.yield_k;
      jac(base + 1 + i, base) = -v * dmu * b;
      jac(base + 1 + i, base + 1 + i) = v / dt + q - v * mu;
      if (j > 0) jac(base + 1 + i, base + 1 + i - stride) = -q;
    }
    jac(base, base) = v / dt + q + v * dsum;
    if (j > 0) jac(base, base - stride) = -q;
  }
}

// Preallocated Newton workspace shared across steps of one run.
struct Workspace {
  Eigen::VectorXd c, ct, r, rt, du, ut;
  Eigen::MatrixXd jc;

  explicit Workspace(int dim)
      : c(dim), ct(dim), r(dim), rt(dim), du(dim), ut(dim), jc(dim, dim) {}

  NewtonStepResult step(Eigen::VectorXd& u, const Eigen::VectorXd& c_old, double dt,
                        const NetworkConfig& cfg, const RtmOptions& opts) {
    NewtonStepResult res;
    const double ln_floor = std::log(opts.floor);
    c = u.array().exp();
    residual_into(c, c_old, dt, cfg, opts, r);
    const double r0 = r.norm();
    jacobian_into(c, dt, cfg, jc);
    jc = jc * c.asDiagonal();  // chain rule: unknowns are u = ln c
    du = jc.partialPivLu().solve(-r);
    if (!du.allFinite()) return res;  // singular system

    res.update_norm = du.lpNorm<Eigen::Infinity>();
    if (res.update_norm < opts.newton_tol) {
      // within tolerance of the implicit solution; applying the last
      // correction leaves an error of order update_norm squared
      ut = u + du;
      for (Eigen::Index i = 0; i < ut.size(); ++i)
        if (ut[i] < ln_floor) {
          ut[i] = ln_floor;
          ++res.floor_activations;
        }
      u = ut;
      res.ok = true;
      return res;
    }

    double alpha = 1.0;
    for (int half = 0; half <= 8; ++half) {
      ut = u + alpha * du;
      long clamped = 0;
      for (Eigen::Index i = 0; i < ut.size(); ++i)
        if (ut[i] < ln_floor) {
          ut[i] = ln_floor;
          ++clamped;
        }
      // a clamped update that no longer moves the iterate means the
      // solution sits on the floor constraint: accept as converged
      const double applied = (ut - u).lpNorm<Eigen::Infinity>();
      if (half == 0 && applied < opts.newton_tol) {
        res.ok = true;
        res.update_norm = applied;
        res.floor_activations = clamped;
        u = ut;
        return res;
      }
      ct = ut.array().exp();
      residual_into(ct, c_old, dt, cfg, opts, rt);
      const double rn = rt.norm();
      if (rn < r0) {  // NaN compares false and rejects the trial
        res.ok = true;
        res.update_norm = (ut - u).lpNorm<Eigen::Infinity>();
        res.floor_activations = clamped;
        u = ut;
        return res;
      }
      alpha *= 0.5;
    }
    return res;  // residual would not decrease
  }
};

double auto_t_max(const NetworkConfig& cfg, const RtmOptions& opts) {
  if (opts.t_max > 0.0) return opts.t_max;
  return 100.0 / cfg.min_dilution();
}

double advance_with(Workspace& ws, NetworkState& state, double& dt, const NetworkConfig& cfg,
                    const RtmOptions& opts, RtmDiagnostics& diag) {
  const double dt_floor = 1e-3 * opts.dt_init;
  Eigen::VectorXd c_old = state.c;
  double dt_try = dt;
  while (true) {
    Eigen::VectorXd u = c_old.cwiseMax(opts.floor).array().log();
    bool converged = false;
    for (int it = 0; it < opts.newton_max_iter; ++it) {
      const auto res = ws.step(u, c_old, dt_try, cfg, opts);
      ++diag.newton_iterations_total;
      if (!res.ok) break;
      diag.floor_activations += res.floor_activations;
      if (res.update_norm < opts.newton_tol) {
        converged = true;
        break;
      }
    }
    if (converged) {
      state.c = u.array().exp();
      state.time += dt_try;
      ++diag.steps_taken;
      diag.max_log_magnitude =
          std::max(diag.max_log_magnitude, u.cwiseAbs().maxCoeff());
      diag.dt_min_accepted = (diag.steps_taken == 1) ? dt_try
                                                     : std::min(diag.dt_min_accepted, dt_try);
      diag.dt_max_accepted = std::max(diag.dt_max_accepted, dt_try);
      diag.dt_final = dt_try;
      dt = std::min(dt_try * opts.dt_growth, opts.dt_max);
      return dt_try;
    }
    dt_try *= 0.5;
    if (dt_try < dt_floor) {
      std::ostringstream os;
      os << "implicit step failed at t = " << state.time << " s: Newton did not converge down to dt = "
         << dt_try << " s";
      throw NumericsError(os.str());
    }
  }
}

}  // namespace

Eigen::VectorXd rtm_residual(const NetworkState& c_new, const NetworkState& c_old, double dt,
                             const NetworkConfig& cfg, const RtmOptions& opts) {
  if (c_new.c.size() != cfg.dimension() || c_old.c.size() != cfg.dimension())
    throw ConfigError("rtm_residual: state dimension does not match configuration");
  if (!(dt > 0.0)) throw std::invalid_argument("rtm_residual: dt must be positive");
  if ((c_new.c.array() <= 0.0).any())
    throw std::domain_error("rtm_residual: log formulation requires positive concentrations");
  Eigen::VectorXd out;
  residual_into(c_new.c, c_old.c, dt, cfg, opts, out);
  return out;
}

NewtonStepResult rtm_newton_step(Eigen::VectorXd& u, const Eigen::VectorXd& c_old, double dt,
                                 const NetworkConfig& cfg, const RtmOptions& opts) {
  if (u.size() != cfg.dimension() || c_old.size() != cfg.dimension())
    throw ConfigError("rtm_newton_step: dimension does not match configuration");
  if (!u.allFinite()) throw std::invalid_argument("rtm_newton_step: non-finite log unknowns");
  Workspace ws(static_cast<int>(u.size()));
  return ws.step(u, c_old, dt, cfg, opts);
}

double rtm_advance(NetworkState& state, double& dt, const NetworkConfig& cfg,
                   const RtmOptions& opts, RtmDiagnostics& diag) {
  Workspace ws(cfg.dimension());
  return advance_with(ws, state, dt, cfg, opts, diag);
}

std::pair<SteadyStateReport, RtmDiagnostics> rtm_run_to_steady(const NetworkConfig& cfg,
                                                               const RtmOptions& opts) {
  validate_network(cfg);
  const double t_end = auto_t_max(cfg, opts);

  SteadyStateReport rep;
  RtmDiagnostics diag;
  Workspace ws(cfg.dimension());

  NetworkState state{0.0, cfg.initial.c.cwiseMax(opts.floor)};
  double dt = opts.dt_init;
  Eigen::VectorXd c_prev = state.c;

  while (state.time < t_end) {
    c_prev = state.c;
    double dt_next = std::min(dt, t_end - state.time);
    const double accepted = advance_with(ws, state, dt_next, cfg, opts, diag);
    dt = dt_next;
    rep.residual_norm = ((state.c - c_prev) / accepted).lpNorm<Eigen::Infinity>();
    if (rep.residual_norm <
        opts.ss_tol * std::max(1.0, state.c.lpNorm<Eigen::Infinity>())) {
      rep.converged = true;
      break;
    }
  }
  rep.state = state;
  rep.elapsed_model_time = state.time;
  return {rep, diag};
}

}  // namespace gradolab
