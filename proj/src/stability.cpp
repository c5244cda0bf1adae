#include "gradolab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gradolab {

std::string to_string(EquilibriumLabel label) {
  switch (label) {
    case EquilibriumLabel::E0: return "E0";
    case EquilibriumLabel::E1: return "E1";
    case EquilibriumLabel::E2: return "E2";
    case EquilibriumLabel::Numeric: return "Numeric";
  }
  return "?";
}

std::string to_string(StabilityKind kind) {
  switch (kind) {
    case StabilityKind::ExponentiallyStable: return "ExponentiallyStable";
    case StabilityKind::Unstable: return "Unstable";
    case StabilityKind::NonHyperbolic: return "NonHyperbolic";
  }
  return "?";
}

std::optional<double> break_even(const MonodKinetics& kin, double dilution) {
  if (dilution < 0.0) throw std::domain_error("break_even: negative dilution rate");
  if (dilution >= kin.mu_max) return std::nullopt;
  return kin.k_s * dilution / (kin.mu_max - dilution);
}

namespace {

using cd = std::complex<double>;

// Roots of the monic quadratic x^2 - tr x + det (eigenvalues of a 2x2).
void quadratic_roots(double tr, double det, std::vector<cd>& out) {
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double sd = std::sqrt(disc);
    const double r1 = (tr >= 0.0) ? 0.5 * (tr + sd) : 0.5 * (tr - sd);
    const double r2 = (r1 != 0.0) ? det / r1 : 0.5 * (tr - std::copysign(sd, tr));
    out.push_back(cd(r1, 0.0));
    out.push_back(cd(r2, 0.0));
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    out.push_back(cd(0.5 * tr, im));
    out.push_back(cd(0.5 * tr, -im));
  }
}

double polish_real_root(double a, double b, double c, double x) {
  for (int it = 0; it < 3; ++it) {
    const double f = ((x + a) * x + b) * x + c;
    const double fp = (3.0 * x + 2.0 * a) * x + b;
    if (fp == 0.0) break;
    x -= f / fp;
  }
  return x;
}

// Roots of x^3 + a x^2 + b x + c, real coefficients.
void cubic_roots(double a, double b, double c, std::vector<cd>& out) {
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  const double disc = -4.0 * p * p * p - 27.0 * q * q;

  if (p == 0.0 && q == 0.0) {
    out.insert(out.end(), 3, cd(shift, 0.0));
    return;
  }
  if (disc >= 0.0) {
    // three real roots, trigonometric form (p < 0 here)
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg);
    for (int k = 0; k < 3; ++k) {
      double x = m * std::cos((phi - 2.0 * std::numbers::pi * k) / 3.0) + shift;
      out.push_back(cd(polish_real_root(a, b, c, x), 0.0));
    }
  } else {
    const double sq = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    const double u3 = -q / 2.0 - std::copysign(sq, q);
    const double u = std::cbrt(u3);
    const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
    const double t1 = u + v;
    const double x1 = polish_real_root(a, b, c, t1 + shift);
    // deflated quadratic t^2 + t1 t + (t1^2 + p), complex pair
    const double im = 0.5 * std::sqrt(std::max(3.0 * t1 * t1 + 4.0 * p, 0.0));
    const double re = -0.5 * t1 + shift;
    out.push_back(cd(x1, 0.0));
    out.push_back(cd(re, im));
    out.push_back(cd(re, -im));
  }
}

double eigen_residual(const Eigen::MatrixXcd& a, const cd& lambda) {
  const Eigen::Index d = a.rows();
  Eigen::MatrixXcd shifted = a - lambda * Eigen::MatrixXcd::Identity(d, d);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
  return svd.singularValues()(d - 1);
}

void sort_spectrum(std::vector<cd>& ev) {
  std::sort(ev.begin(), ev.end(), [](const cd& x, const cd& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
}

}  // namespace

Spectrum eigenvalues(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  if (a.rows() == 0) throw std::invalid_argument("eigenvalues: empty matrix");
  if (a.rows() > 512) throw std::invalid_argument("eigenvalues: dimension exceeds 512");
  if (!a.allFinite()) throw std::invalid_argument("eigenvalues: non-finite entries");

  const Eigen::Index d = a.rows();
  Spectrum spec;

  if (d <= 3) {
    // scale for conditioning of the characteristic polynomial
    const double s = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
    const Eigen::MatrixXd m = a / s;
    if (d == 1) {
      spec.eigenvalues.push_back(cd(m(0, 0), 0.0));
    } else if (d == 2) {
      quadratic_roots(m.trace(), m.determinant(), spec.eigenvalues);
    } else {
      const double tr = m.trace();
      const double c2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                        m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
      cubic_roots(-tr, c2, -m.determinant(), spec.eigenvalues);
    }
    for (auto& ev : spec.eigenvalues) ev *= s;
    const Eigen::MatrixXcd ac = a.cast<cd>();
    for (const auto& ev : spec.eigenvalues)
      spec.residual = std::max(spec.residual, eigen_residual(ac, ev));
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success)
      throw NumericsError("eigenvalues: dense eigensolver failed to converge");
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    for (Eigen::Index i = 0; i < d; ++i) {
      spec.eigenvalues.push_back(vals(i));
      const Eigen::VectorXcd v = vecs.col(i);
      const double r = (a.cast<cd>() * v - vals(i) * v).norm() / v.norm();
      spec.residual = std::max(spec.residual, r);
    }
  }
  sort_spectrum(spec.eigenvalues);
  return spec;
}

StabilityClass classify_equilibrium(const Spectrum& s, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("classify_equilibrium: tol must be positive");
  if (s.eigenvalues.empty()) throw std::invalid_argument("classify_equilibrium: empty spectrum");
  StabilityClass cls;
  cls.margin = std::numeric_limits<double>::infinity();
  bool any_zero = false, any_pos = false;
  for (const auto& ev : s.eigenvalues) {
    const double re = ev.real();
    cls.margin = std::min(cls.margin, std::abs(re));
    if (std::abs(re) <= tol)
      any_zero = true;
    else if (re > 0.0)
      any_pos = true;
  }
  cls.kind = any_zero ? StabilityKind::NonHyperbolic
                      : (any_pos ? StabilityKind::Unstable : StabilityKind::ExponentiallyStable);
  return cls;
}

Eigen::MatrixXd jacobian_analytic(const NetworkState& point, const NetworkConfig& cfg) {
  const int dim = cfg.dimension();
  if (point.c.size() != dim)
    throw ConfigError("jacobian_analytic: state dimension does not match configuration");
  const int n = cfg.n_cells();
  const int m = cfg.n_species();
  const int stride = 1 + m;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);

  for (int i = 0; i < n; ++i) {
    const double d = cfg.dilution(i);
    const double s = point.c[i * stride];
    const int rs = i * stride;  // substrate row of cell i
    double dsum = 0.0;
    for (int j = 0; j < m; ++j) {
      const auto& sp = cfg.species[j];
      const double mu = monod_rate(s, sp.kinetics);
      const double dmu = monod_rate_derivative(s, sp.kinetics);
      const double b = point.c[rs + 1 + j];
      dsum += dmu * b / sp.yield_k;
      jac(rs, rs + 1 + j) = -mu / sp.yield_k;
      jac(rs + 1 + j, rs) = dmu * b;
      jac(rs + 1 + j, rs + 1 + j) = mu - d;
      if (i > 0) jac(rs + 1 + j, rs + 1 + j - stride) = d;
    }
    jac(rs, rs) = -dsum - d;
    if (i > 0) jac(rs, rs - stride) = d;
  }
  return jac;
}

Eigen::MatrixXd jacobian_fd(const NetworkState& point, const NetworkConfig& cfg, double h) {
  const int dim = cfg.dimension();
  if (point.c.size() != dim)
    throw ConfigError("jacobian_fd: state dimension does not match configuration");
  if (!(h > 0.0)) throw std::invalid_argument("jacobian_fd: step must be positive");
  Eigen::MatrixXd jac(dim, dim);
  Eigen::VectorXd xp, xm, fp, fm;
  for (int j = 0; j < dim; ++j) {
    const double step = h * std::max(1.0, std::abs(point.c[j]));
    xp = point.c;
    xm = point.c;
    xp[j] += step;
    xm[j] -= step;
    if (xm[j] < 0.0) xm[j] = 0.0;  // stay in the domain of monod_rate
    rhs_into(xp, cfg, fp);
    rhs_into(xm, cfg, fm);
    jac.col(j) = (fp - fm) / (xp[j] - xm[j]);
  }
  return jac;
}

namespace {

Spectrum spectrum_from_values(std::initializer_list<double> vals) {
  Spectrum s;
  for (double v : vals) s.eigenvalues.push_back(cd(v, 0.0));
  sort_spectrum(s.eigenvalues);
  return s;
}

}  // namespace

std::vector<std::pair<EquilibriumPoint, StabilityClass>> single_species_equilibria(
    const NetworkConfig& cfg, double tol) {
  if (cfg.n_cells() != 1 || cfg.n_species() != 1)
    throw ConfigError("single_species_equilibria: exactly one reactor and one species required");
  const double d = cfg.dilution(0);
  const auto& sp = cfg.species[0];
  const double mu_in = monod_rate(cfg.s_in, sp.kinetics);

  std::vector<std::pair<EquilibriumPoint, StabilityClass>> out;

  EquilibriumPoint e1{EquilibriumLabel::E1, Eigen::Vector2d(cfg.s_in, 0.0)};
  out.emplace_back(e1, classify_equilibrium(spectrum_from_values({-d, mu_in - d}), tol));

  const auto lambda = break_even(sp.kinetics, d);
  if (lambda && *lambda < cfg.s_in) {
    const double bstar = sp.yield_k * (cfg.s_in - *lambda);
    EquilibriumPoint e2{EquilibriumLabel::E2, Eigen::Vector2d(*lambda, bstar)};
    const double v2 = -monod_rate_derivative(*lambda, sp.kinetics) / sp.yield_k * bstar;
    out.emplace_back(e2, classify_equilibrium(spectrum_from_values({-d, v2}), tol));
  }
  return out;
}

std::vector<std::pair<EquilibriumPoint, StabilityClass>> two_species_equilibria(
    const NetworkConfig& cfg, double tol) {
  if (cfg.n_cells() != 1 || cfg.n_species() != 2)
    throw ConfigError("two_species_equilibria: exactly one reactor and two species required");
  const double d = cfg.dilution(0);
  const auto& sp1 = cfg.species[0];
  const auto& sp2 = cfg.species[1];
  const double mu1_in = monod_rate(cfg.s_in, sp1.kinetics);
  const double mu2_in = monod_rate(cfg.s_in, sp2.kinetics);

  std::vector<std::pair<EquilibriumPoint, StabilityClass>> out;

  EquilibriumPoint e0{EquilibriumLabel::E0, Eigen::Vector3d(cfg.s_in, 0.0, 0.0)};
  out.emplace_back(e0,
                   classify_equilibrium(spectrum_from_values({-d, mu1_in - d, mu2_in - d}), tol));

  const auto l1 = break_even(sp1.kinetics, d);
  const auto l2 = break_even(sp2.kinetics, d);
  const bool has1 = l1 && *l1 < cfg.s_in;
  const bool has2 = l2 && *l2 < cfg.s_in;

  // cross eigenvalue of E_i is mu_j(lambda_i) - D; both within tol of zero
  // means lambda_1 = lambda_2 and the interior equilibria coincide
  if (has1 && has2 && std::abs(monod_rate(*l1, sp2.kinetics) - d) <= tol &&
      std::abs(monod_rate(*l2, sp1.kinetics) - d) <= tol) {
    const double b1 = sp1.yield_k * (cfg.s_in - *l1);
    EquilibriumPoint merged{EquilibriumLabel::E1, Eigen::Vector3d(*l1, b1, 0.0)};
    const double v2 = -monod_rate_derivative(*l1, sp1.kinetics) * (cfg.s_in - *l1);
    auto cls = classify_equilibrium(
        spectrum_from_values({-d, v2, monod_rate(*l1, sp2.kinetics) - d}), tol);
    cls.kind = StabilityKind::NonHyperbolic;
    out.emplace_back(merged, cls);
    return out;
  }

  if (has1) {
    const double b1 = sp1.yield_k * (cfg.s_in - *l1);
    EquilibriumPoint e1{EquilibriumLabel::E1, Eigen::Vector3d(*l1, b1, 0.0)};
    const double v2 = -monod_rate_derivative(*l1, sp1.kinetics) * (cfg.s_in - *l1);
    const double v3 = monod_rate(*l1, sp2.kinetics) - d;
    out.emplace_back(e1, classify_equilibrium(spectrum_from_values({-d, v2, v3}), tol));
  }
  if (has2) {
    const double b2 = sp2.yield_k * (cfg.s_in - *l2);
    EquilibriumPoint e2{EquilibriumLabel::E2, Eigen::Vector3d(*l2, 0.0, b2)};
    const double v2 = -monod_rate_derivative(*l2, sp2.kinetics) * (cfg.s_in - *l2);
    const double v3 = monod_rate(*l2, sp1.kinetics) - d;
    out.emplace_back(e2, classify_equilibrium(spectrum_from_values({-d, v2, v3}), tol));
  }
  return out;
}

EquilibriumPoint refine_equilibrium(const NetworkConfig& cfg, const Eigen::VectorXd& seed,
                                    double tol, int max_iter) {
  if (seed.size() != cfg.dimension())
    throw ConfigError("refine_equilibrium: seed dimension does not match configuration");
  Eigen::VectorXd x = seed.cwiseMax(0.0);
  Eigen::VectorXd f, ft, dx;
  rhs_into(x, cfg, f);
  for (int it = 0; it < max_iter; ++it) {
    if (f.lpNorm<Eigen::Infinity>() < tol * std::max(1.0, x.lpNorm<Eigen::Infinity>())) break;
    const Eigen::MatrixXd jac = jacobian_analytic(NetworkState{0.0, x}, cfg);
    dx = jac.partialPivLu().solve(-f);
    double alpha = 1.0;
    const double f0 = f.norm();
    bool moved = false;
    for (int half = 0; half <= 8; ++half) {
      Eigen::VectorXd xt = (x + alpha * dx).cwiseMax(0.0);
      rhs_into(xt, cfg, ft);
      if (ft.norm() < f0) {
        x = xt;
        f = ft;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
  }
  return EquilibriumPoint{EquilibriumLabel::Numeric, x};
}

Spectrum point_spectrum(const NetworkConfig& cfg, const Eigen::VectorXd& state) {
  return eigenvalues(jacobian_analytic(NetworkState{0.0, state}, cfg));
}

std::vector<std::pair<EquilibriumPoint, StabilityClass>> equilibrium_report(
    const NetworkConfig& cfg, const IntegratorOptions& opts, double tol) {
  validate_network(cfg);
  if (cfg.n_cells() == 1 && cfg.n_species() == 1) return single_species_equilibria(cfg, tol);
  if (cfg.n_cells() == 1 && cfg.n_species() == 2) return two_species_equilibria(cfg, tol);

  const auto ss = find_steady_state(cfg, opts);
  auto eq = refine_equilibrium(cfg, ss.state.c);
  auto cls = classify_equilibrium(point_spectrum(cfg, eq.state), tol);
  return {{std::move(eq), cls}};
}

}  // namespace gradolab
