#pragma once

#include <cmath>

namespace dewet {

// Parameters of the thickness-dependent surface energy
//
//   g(h) = 1 + (1 - sigma) * (exp(-h/eps) - 2 exp(-h/(2 eps)))
//
// sigma is the cosine of the equilibrium contact angle, epsilon the
// thickness scale of the substrate interaction, h_bar the matching
// thickness below which the slope g'(h) is replaced by a quadratic
// surrogate (defaults to epsilon).
struct WettingParams {
  double sigma;
  double epsilon;
  double h_bar;

  WettingParams(double sigma_, double epsilon_);
  WettingParams(double sigma_, double epsilon_, double h_bar_);

  double contact_angle() const { return std::acos(sigma); }
};

// Coefficients of the quadratic surrogate z(h) = (c1 + c2 h) h that
// replaces the energy slope on [0, h_bar].  Matching is C^1 at h_bar:
// z(h_bar) = g'(h_bar) and z'(h_bar) = g''(h_bar).
struct SurrogateCoeffs {
  double c1 = 0.0;
  double c2 = 0.0;

  double eval(double h) const { return (c1 + c2 * h) * h; }
};

// One-step linearization of the wetting term about the previous height:
// the term enters the implicit system as coeff * h_new + offset, where
// exactly one of the two is nonzero.
struct WettingLinearForm {
  double coeff = 0.0;
  double offset = 0.0;
};

// Surface energy density g(h).  g(0) = sigma, g(inf) = 1.
double surface_energy(double h, const WettingParams& p);

// Excess over the far-field value, g(h) - 1.  Negative near h = 0.
double wetting_excess(double h, const WettingParams& p);

// dg/dh.  Vanishes at h = 0 and decays for h >> eps.
double surface_energy_deriv(double h, const WettingParams& p);

// d^2 g / dh^2.
double surface_energy_second_deriv(double h, const WettingParams& p);

// Surrogate coefficients for the given parameters.  sigma = 1 gives a
// constant energy, hence c1 = c2 = 0.
SurrogateCoeffs surrogate_coeffs(const WettingParams& p);

// Piecewise-regularized slope: the surrogate below h_bar, the exact
// derivative above.  Continuously differentiable at h_bar.
double regularized_deriv(double h, const WettingParams& p);

// Semi-implicit treatment of the regularized slope: below h_bar the
// surrogate factors as (c1 + c2 h_old) * h_new, above it the exact
// derivative is taken fully explicit.
WettingLinearForm semi_implicit_deriv(double h_old, const WettingParams& p);

// Energy and slope from a single exponential evaluation; assembly loops
// need both at every element.
struct EnergyAndSlope {
  double energy;
  double slope;
};

inline EnergyAndSlope surface_energy_with_deriv(double h, const WettingParams& p) {
  const double u = std::exp(-h / (2.0 * p.epsilon));
  const double a = 1.0 - p.sigma;
  return {1.0 + a * (u * u - 2.0 * u), a / p.epsilon * (u - u * u)};
}

}  // namespace dewet
