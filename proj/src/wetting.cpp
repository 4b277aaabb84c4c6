#include "dewet/wetting.hpp"

#include <stdexcept>
#include <string>

namespace dewet {

namespace {

void check(double sigma, double epsilon, double h_bar) {
  // sigma = 1 (zero contact angle, constant energy) is admitted as the
  // degenerate limit; it is useful as a reference case.
  if (!(sigma > 0.0) || !(sigma <= 1.0))
    throw std::invalid_argument("WettingParams: sigma must lie in (0, 1], got " +
                                std::to_string(sigma));
  if (!(epsilon > 0.0))
    throw std::invalid_argument("WettingParams: epsilon must be positive");
  if (!(h_bar > 0.0))
    throw std::invalid_argument("WettingParams: h_bar must be positive");
}

}  // namespace

WettingParams::WettingParams(double sigma_, double epsilon_)
    : WettingParams(sigma_, epsilon_, epsilon_) {}

WettingParams::WettingParams(double sigma_, double epsilon_, double h_bar_)
    : sigma(sigma_), epsilon(epsilon_), h_bar(h_bar_) {
  check(sigma, epsilon, h_bar);
}

double surface_energy(double h, const WettingParams& p) {
  const double u = std::exp(-h / (2.0 * p.epsilon));
  return 1.0 + (1.0 - p.sigma) * (u * u - 2.0 * u);
}

double wetting_excess(double h, const WettingParams& p) {
  const double u = std::exp(-h / (2.0 * p.epsilon));
  return (1.0 - p.sigma) * (u * u - 2.0 * u);
}

double surface_energy_deriv(double h, const WettingParams& p) {
  const double u = std::exp(-h / (2.0 * p.epsilon));
  return (1.0 - p.sigma) / p.epsilon * (u - u * u);
}

double surface_energy_second_deriv(double h, const WettingParams& p) {
  const double u = std::exp(-h / (2.0 * p.epsilon));
  return (1.0 - p.sigma) / (p.epsilon * p.epsilon) * (u * u - 0.5 * u);
}

SurrogateCoeffs surrogate_coeffs(const WettingParams& p) {
  // With f(h) = g'(h) / h, the C^1 matching conditions at h_bar reduce to
  // c1 = f(h_bar) - h_bar f'(h_bar) and c2 = f'(h_bar).
  const double hb = p.h_bar;
  const double d1 = surface_energy_deriv(hb, p);
  const double d2 = surface_energy_second_deriv(hb, p);
  const double f = d1 / hb;
  const double fp = (d2 - f) / hb;
  return {f - hb * fp, fp};
}

double regularized_deriv(double h, const WettingParams& p) {
  if (h <= p.h_bar) return surrogate_coeffs(p).eval(h);
  return surface_energy_deriv(h, p);
}

WettingLinearForm semi_implicit_deriv(double h_old, const WettingParams& p) {
  if (h_old <= p.h_bar) {
    const SurrogateCoeffs z = surrogate_coeffs(p);
    return {z.c1 + z.c2 * h_old, 0.0};
  }
  return {0.0, surface_energy_deriv(h_old, p)};
}

}  // namespace dewet
