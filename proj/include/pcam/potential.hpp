#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "pcam/enumeration.hpp"

namespace pcam {

struct HarmonicSolve {
  std::vector<std::uint32_t> y_set, z_set;
  Eigen::VectorXd values;  // h(x) for every state; 1 on Y, 0 on Z
  double residual = 0.0;   // max |h - P h| over interior states
};

/// Exact potential-theoretic quantities for one enumerated instance at one
/// beta. Absorbing problems share a single LU factorization of
/// M = I - P + 1 mu^T; per-query work is a handful of triangular solves.
class ExactChain {
 public:
  ExactChain(TorusGeometry g, const ModelParams& p, int cap = kDefaultEnumCap);

  const TorusGeometry& geometry() const { return geom_; }
  const ModelParams& params() const { return params_; }
  std::uint32_t nstates() const { return lp_.nstates; }
  const LogProbTables& log_probs() const { return lp_; }
  const GibbsTable& gibbs() const { return gibbs_; }
  double log_mu(std::uint32_t x) const { return gibbs_.log_mu[x]; }

  const Eigen::MatrixXd& dense_p();

  /// Solves u|_A = 0 and ((I-P)u)(x) = rhs(x) for x outside A.
  Eigen::VectorXd absorbing_solve(const std::vector<std::uint32_t>& absorbing,
                                  const Eigen::VectorXd& rhs);

  HarmonicSolve equilibrium_potential(const std::vector<std::uint32_t>& y_set,
                                      const std::vector<std::uint32_t>& z_set);

  /// Dirichlet form of an arbitrary state-indexed function (log of the value).
  double log_dirichlet_form(const Eigen::VectorXd& f);
  double dirichlet_form(const Eigen::VectorXd& f) { return std::exp(log_dirichlet_form(f)); }

  /// log cap(Y,Z) via the Dirichlet form of the equilibrium potential.
  double log_capacity(const std::vector<std::uint32_t>& y_set,
                      const std::vector<std::uint32_t>& z_set);

  /// log cap(Y,Z) via the escape-probability route
  /// cap(Y,Z) = sum_{y in Y} mu(y) P_y(tau_Z < tau_Y).
  double log_capacity_escape(const std::vector<std::uint32_t>& y_set,
                             const std::vector<std::uint32_t>& z_set);

  /// E_x[tau_A]; for x inside A this is the expected return time (t > 0).
  double mean_hitting(std::uint32_t x, const std::vector<std::uint32_t>& target);

  /// mu-weighted mean hitting time started from the Gibbs measure restricted
  /// to `starts`.
  double mean_hitting_set(const std::vector<std::uint32_t>& starts,
                          const std::vector<std::uint32_t>& target);

  /// P_x(tau_Y < tau_Z) for disjoint Y, Z and x outside both, plus the
  /// capacity-ratio upper bound cap(x,Y)/cap(x,Z).
  struct HittingProb {
    double prob;
    double cap_ratio_bound;
  };
  HittingProb hitting_prob(std::uint32_t x, const std::vector<std::uint32_t>& y_set,
                           const std::vector<std::uint32_t>& z_set);

  /// P_x(X_{tau_A} = a) for every a in A (the hitting distribution on A).
  Eigen::VectorXd hitting_distribution(std::uint32_t x,
                                       const std::vector<std::uint32_t>& target);

  /// Potential-theoretic metastability ratio of Definition pta:
  /// max_{x not in M} mu(x)/cap(x,M)  /  min_{x in M} mu(x)/cap(x,M\{x}).
  double pta_metastable_ratio(const std::vector<std::uint32_t>& m_set);

  /// exp(-beta gamma) mu(starts)/cap(starts, target): finite-beta prefactor
  /// estimate 1/k.
  double prefactor_extract(const std::vector<std::uint32_t>& starts,
                           const std::vector<std::uint32_t>& target, double gamma);

  /// max_y |sum_x mu(x) p(x,y) - mu(y)| / mu(y).
  double stationarity_residual();

 private:
  TorusGeometry geom_;
  ModelParams params_;
  LogProbTables lp_;
  GibbsTable gibbs_;
  std::unique_ptr<Eigen::MatrixXd> p_;
  std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
  Eigen::VectorXd mu_;

  void ensure_lu();
  Eigen::VectorXd refined_solve(const Eigen::VectorXd& b);
};

}  // namespace pcam
