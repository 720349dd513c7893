#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pcam/enumeration.hpp"

namespace pcam {

/// Row-stochastic transition operator over the enumerated space, either held
/// as a dense matrix or applied row-by-row from the factorized tables.
class TransitionOperator {
 public:
  enum class Mode { Dense, Factorized };

  static TransitionOperator assemble_dense(TorusGeometry g, const ModelParams& p,
                                           int cap = kDefaultEnumCap);
  /// Matrix-free variant; each apply costs one row evaluation per state pair.
  static TransitionOperator assemble_factorized(TorusGeometry g, const ModelParams& p,
                                                int cap = 16);

  Mode mode() const { return mode_; }
  std::uint32_t nstates() const { return lp_.nstates; }
  const ModelParams& params() const { return params_; }
  const TorusGeometry& geometry() const { return geom_; }
  const Eigen::MatrixXd& dense() const;
  const LogProbTables& log_probs() const { return lp_; }
  const GibbsTable& gibbs() const { return gibbs_; }

  /// y = P^T x (distribution evolution) via the factorized tables.
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& x) const;

  double max_row_sum_error() const;

 private:
  Mode mode_ = Mode::Dense;
  TorusGeometry geom_;
  ModelParams params_;
  LogProbTables lp_;
  GibbsTable gibbs_;
  Eigen::MatrixXd p_;
};

struct SpectralGap {
  double rho;  // 1 - a2
  double a2;   // second eigenvalue of P
};

enum class GapMethod {
  DenseEigen,        // full symmetric eigensolve of the additive Laplacian
  SubspaceIteration  // deflated power/subspace iteration
};

/// Spectral gap of the reversible operator. Both methods finish with a
/// log-space Rayleigh-quotient evaluation, so rho keeps full relative accuracy
/// even when it is far below machine epsilon relative to 1.
SpectralGap spectral_gap(const TransitionOperator& op,
                         GapMethod method = GapMethod::DenseEigen);

/// Minimal n with max_x TV(P^n(x,.), mu) <= eps, found by repeated squaring
/// and bisection. Throws if n would exceed 2^40.
std::uint64_t tv_mixing_time(const TransitionOperator& op, double eps);

/// Worst-start total-variation distance to the Gibbs measure after n steps.
double tv_distance_at(const TransitionOperator& op, std::uint64_t n);

struct P0Row {
  double beta;
  double value;  // -(1/beta) log p(plus, plus)
};

/// Assumption P0 diagnostic: closed-form -(1/beta) log p(+1,+1) per beta.
/// Needs no enumeration, so any geometry is accepted.
std::vector<P0Row> assumption_p0_check(TorusGeometry g, double h,
                                       const std::vector<double>& betas);

}  // namespace pcam
