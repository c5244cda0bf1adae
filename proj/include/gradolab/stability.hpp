#ifndef GRADOLAB_STABILITY_HPP
#define GRADOLAB_STABILITY_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gradolab/network.hpp"
#include "gradolab/ode.hpp"

namespace gradolab {

enum class EquilibriumLabel { E0, E1, E2, Numeric };

struct EquilibriumPoint {
  EquilibriumLabel label = EquilibriumLabel::Numeric;
  Eigen::VectorXd state;  // same layout as NetworkState::c
};

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;  // sorted by (Re, Im)
  double residual = 0.0;  // max over pairs of |Av - lambda v| / |v|
};

enum class StabilityKind { ExponentiallyStable, Unstable, NonHyperbolic };

struct StabilityClass {
  StabilityKind kind = StabilityKind::NonHyperbolic;
  double margin = 0.0;  // min |Re lambda| over the spectrum, 1/s
};

/// Default absolute tolerance on Re(lambda) for hyperbolicity decisions.
inline constexpr double kHyperbolicityTol = 1e-9;

std::string to_string(EquilibriumLabel label);
std::string to_string(StabilityKind kind);

/// Break-even concentration: the solution of mu(S) = D,
/// lambda = k_s D / (mu_max - D) for 0 <= D < mu_max; absent otherwise.
std::optional<double> break_even(const MonodKinetics& kin, double dilution);

/// Full spectrum of a real square matrix. Dimensions up to 3 use the
/// characteristic polynomial in closed form (with a Newton polish);
/// larger matrices go through the Schur-based dense solver.
Spectrum eigenvalues(const Eigen::MatrixXd& a);

StabilityClass classify_equilibrium(const Spectrum& s, double tol = kHyperbolicityTol);

/// Exact Jacobian of the series-chemostat rhs at a given point, in the
/// natural (S, B...) coordinates, any number of cells and species.
Eigen::MatrixXd jacobian_analytic(const NetworkState& point, const NetworkConfig& cfg);

/// Central finite-difference Jacobian; component-wise step h * max(1, |x_j|).
Eigen::MatrixXd jacobian_fd(const NetworkState& point, const NetworkConfig& cfg, double h = 1e-7);

/// Closed-form equilibria and classification for one reactor, one species.
/// E1 = (S_in, 0) always; E2 = (lambda, k (S_in - lambda)) when it exists.
std::vector<std::pair<EquilibriumPoint, StabilityClass>> single_species_equilibria(
    const NetworkConfig& cfg, double tol = kHyperbolicityTol);

/// Closed-form equilibria for one reactor, two species (competition).
/// E0 = (S_in, 0, 0); E_i = (lambda_i, ..., k_i (S_in - lambda_i), ...).
/// Coinciding break-even concentrations merge E1 = E2 into one
/// non-hyperbolic point.
std::vector<std::pair<EquilibriumPoint, StabilityClass>> two_species_equilibria(
    const NetworkConfig& cfg, double tol = kHyperbolicityTol);

/// Damped Newton refinement of rhs = 0 from a seed (typically an ODE
/// steady state); for networks with no closed form.
EquilibriumPoint refine_equilibrium(const NetworkConfig& cfg, const Eigen::VectorXd& seed,
                                    double tol = 1e-12, int max_iter = 50);

/// Equilibrium report for arbitrary configs: closed forms where available,
/// otherwise a numeric equilibrium seeded from the ODE steady state.
std::vector<std::pair<EquilibriumPoint, StabilityClass>> equilibrium_report(
    const NetworkConfig& cfg, const IntegratorOptions& opts, double tol = kHyperbolicityTol);

/// Spectrum of the Jacobian at a point.
Spectrum point_spectrum(const NetworkConfig& cfg, const Eigen::VectorXd& state);

}  // namespace gradolab

#endif  // GRADOLAB_STABILITY_HPP
