#include "pcam/params.hpp"

#include <cmath>
#include <stdexcept>

namespace pcam {

ModelParams::ModelParams(double h_, double beta_) : h(h_), beta(beta_) {
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("h must be in (0,1)");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("beta must be positive and finite");
}

bool ModelParams::h_near_tie(double tol) const {
  const double x = 2.0 / h;
  return std::fabs(x - std::round(x)) < tol;
}

EnergyScale EnergyScale::from_h(double h, std::int64_t max_q, double tol) {
  EnergyScale s;
  s.h = h;
  for (std::int64_t q = 1; q <= max_q; ++q) {
    const double pd = h * static_cast<double>(q);
    const double pr = std::round(pd);
    if (std::fabs(pd - pr) < tol * q && pr >= 1 && pr < q) {
      s.p = static_cast<std::int64_t>(pr);
      s.q = q;
      return s;
    }
  }
  return s;  // inexact
}

int critical_length(double h) {
  return static_cast<int>(std::floor(2.0 / h)) + 1;
}

double gamma_pca(double h) {
  const double lam = critical_length(h);
  return -2.0 * h * lam * lam + 2.0 * lam * (4.0 + h) - 2.0 * h;
}

double v_star(double h) { return 2.0 * (2.0 - h); }

}  // namespace pcam
