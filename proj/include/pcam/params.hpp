#pragma once

#include <cstdint>
#include <optional>

namespace pcam {

/// External field h in (0,1) and inverse temperature beta > 0.
struct ModelParams {
  double h = 0.5;
  double beta = 1.0;

  ModelParams() = default;
  ModelParams(double h_, double beta_);

  /// Eq. for the critical length is discontinuous where 2/h is an integer;
  /// callers should warn when this is (numerically) the case.
  bool h_near_tie(double tol = 1e-9) const;
};

/// Lattice energies are integer multiples of 1/q when h = p/q. Exact-mode
/// landscape computations carry energies as int64 in these units.
struct EnergyScale {
  std::int64_t p = 0;
  std::int64_t q = 0;  // q == 0 means no exact representation found
  double h = 0.0;

  bool exact() const { return q > 0; }
  double unit() const { return 1.0 / static_cast<double>(q); }
  double to_double(std::int64_t scaled) const { return static_cast<double>(scaled) / q; }

  static EnergyScale from_h(double h, std::int64_t max_q = 4096, double tol = 1e-12);
};

/// Critical droplet side lambda = [2/h] + 1.
int critical_length(double h);

/// Energy barrier for this PCA: -2 h lambda^2 + 2 lambda (4+h) - 2 h.
double gamma_pca(double h);

/// Uniform stability-level bound 2(2-h) for all non-trap-set configurations.
double v_star(double h);

}  // namespace pcam
