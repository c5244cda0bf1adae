#ifndef GRADOLAB_KINETICS_HPP
#define GRADOLAB_KINETICS_HPP

#include <stdexcept>

namespace gradolab {

/// Monod growth law parameters. mu_max [1/s], k_s [mol/l].
struct MonodKinetics {
  double mu_max = 0.0;
  double k_s = 0.0;
};

/// mu(S) = mu_max * S / (k_s + S). Exactly zero at S = 0.
inline double monod_rate(double s, const MonodKinetics& kin) {
  if (s < 0.0) throw std::domain_error("monod_rate: negative substrate concentration");
  return kin.mu_max * s / (kin.k_s + s);
}

/// mu'(S) = mu_max * k_s / (k_s + S)^2. Strictly positive for finite S.
inline double monod_rate_derivative(double s, const MonodKinetics& kin) {
  if (s < 0.0) throw std::domain_error("monod_rate_derivative: negative substrate concentration");
  const double den = kin.k_s + s;
  return kin.mu_max * kin.k_s / (den * den);
}

}  // namespace gradolab

#endif  // GRADOLAB_KINETICS_HPP
