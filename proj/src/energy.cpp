#include "pcam/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace pcam {

namespace {
// log cosh(x) without overflow: |x| + log1p(e^{-2|x|}) - log 2.
double log_cosh(double x) {
  const double a = std::fabs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453094;
}
}  // namespace

double virtual_energy(const ModelParams& p, const SpinConfig& c) {
  const int n = c.sites();
  double mag = 0.0, pen = 0.0;
  for (int i = 0; i < n; ++i) {
    mag += c.spin(i);
    pen += std::fabs(local_field(c, i) + p.h);
  }
  return -p.h * mag - pen;
}

double hamiltonian_G(const ModelParams& p, const SpinConfig& c) {
  const int n = c.sites();
  double mag = 0.0, lc = 0.0;
  for (int i = 0; i < n; ++i) {
    mag += c.spin(i);
    lc += log_cosh(p.beta * (local_field(c, i) + p.h));
  }
  return -p.h * mag - lc / p.beta;
}

double delta_cost(const ModelParams& p, const SpinConfig& src, const SpinConfig& dst) {
  if (!(src.geometry() == dst.geometry()))
    throw std::invalid_argument("delta_cost: geometry mismatch");
  const int n = src.sites();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double field = local_field(src, i) + p.h;
    if (dst.spin(i) * field < 0.0) sum += 2.0 * std::fabs(field);
  }
  return sum;
}

double transition_energy(const ModelParams& p, const SpinConfig& src, const SpinConfig& dst) {
  return virtual_energy(p, src) + delta_cost(p, src, dst);
}

std::int64_t virtual_energy_scaled(const EnergyScale& scale, const SpinConfig& c) {
  const int n = c.sites();
  std::int64_t mag = 0, pen = 0;
  for (int i = 0; i < n; ++i) {
    mag += c.spin(i);
    pen += std::llabs(scale.q * local_field(c, i) + scale.p);
  }
  return -scale.p * mag - pen;
}

std::int64_t delta_cost_scaled(const EnergyScale& scale, const SpinConfig& src,
                               const SpinConfig& dst) {
  const int n = src.sites();
  std::int64_t sum = 0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t field = scale.q * local_field(src, i) + scale.p;
    if (dst.spin(i) > 0 ? field < 0 : field > 0) sum += 2 * std::llabs(field);
  }
  return sum;
}

}  // namespace pcam
