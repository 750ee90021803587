// SPDX-License-Identifier: Apache-2.0
//
// Consensus ADMM for the waveform x with the receive filter fixed. The cost
// splits into a communication block (x_c), a sensing QCQP block (x_s) and a
// similarity block (x_b), tied to the constant-modulus consensus variable x
// through scaled duals u_i = mu_i / gamma.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "isac/comm.hpp"
#include "isac/radar.hpp"

namespace isac {

struct AdmmState {
  CVector x;  // consensus, constant-modulus after projection
  CVector xc, xs, xb;
  CVector uc, us, ub;
  int iter = 0;
  double r_primal = 0.0;
  double s_dual = 0.0;

  /// x given, local copies set to x and duals to zero.
  static AdmmState start(const CVector& x);
};

/// Communication block: argmin rho ||H~ x - s||^2 + (gamma/2) ||x - v||^2.
/// H~ = I_N (x) H is block diagonal, so the normal matrix
/// rho H^H H + (gamma/2) I_T is factored once and applied per column.
class CommBlock {
 public:
  CommBlock(const Channel& channel, const SymbolMatrix& symbols, double rho, double gamma);
  CVector solve(const CVector& v) const;

 private:
  Eigen::LLT<CMatrix> normal_;
  CMatrix weighted_rhs_;  // rho H^H S
  double half_gamma_;
  int tx_;
  int symbols_;
};

struct QcqpDual {
  double tau = 0.0;
  double q_value = 0.0;  // x_s(tau)^H R_t x_s(tau)
  int bisection_steps = 0;
};

struct QcqpSolution {
  CVector x;
  QcqpDual dual;
};

/// Sensing block:
///   min (1 - rho) x^H R_i x + (gamma/2) ||x - v||^2  s.t.  x^H R_t x <= sigma_0^2.
/// Stationarity gives ((1 - rho) R_i + (gamma/2) I + tau R_t) x = (gamma/2) v;
/// tau = 0 is tried first, otherwise q(tau) = x(tau)^H R_t x(tau) is strictly
/// decreasing and the root of q(tau) = sigma_0^2 is bracketed by doubling and
/// bisected. R_i and R_t are carried as factors F F^H; when their combined
/// rank is below the dimension each solve is a small Woodbury system.
class QcqpBlock {
 public:
  struct Params {
    double target_power = 1.0;  // sigma_0^2
    double rho = 0.0;
    double gamma = 1.0;
    double tol_bisect = 1e-8;
  };

  /// Dense PSD inputs. Throws ContractViolation when either is not Hermitian PSD.
  QcqpBlock(const CMatrix& R_i, const CMatrix& R_t, const Params& params);
  /// Factored inputs R_i = F_i F_i^H, R_t = F_t F_t^H.
  static QcqpBlock from_factors(CMatrix interference_factor, CMatrix target_factor, const Params& params);

  QcqpSolution solve(const CVector& v) const;
  /// x_s(tau) for a given multiplier.
  CVector solve_at(double tau, const CVector& v) const;
  double q(const CVector& x) const;
  double objective(const CVector& x, const CVector& v) const;

  Eigen::Index dimension() const { return dim_; }
  bool low_rank() const { return low_rank_; }

 private:
  QcqpBlock(CMatrix fi, CMatrix ft, const Params& params, Eigen::Index dim);

  struct Prepared;  // per-rhs projections onto the factor span
  Prepared prepare(const CVector& v) const;
  CVector solve_prepared(double tau, const Prepared& p, double* q_out) const;

  CMatrix fi_;  // dim x ri
  CMatrix ft_;  // dim x rt
  CMatrix gram_;  // [fi ft]^H [fi ft]
  Params params_;
  Eigen::Index dim_;
  bool low_rank_;
  Eigen::LLT<CMatrix> tau0_;  // cached factorization of the tau = 0 system
};

CVector update_xc(const AdmmState& state, const CommBlock& block);
QcqpSolution update_xs(const AdmmState& state, const QcqpBlock& block);
/// ((1 - rho) lambda x0 + (gamma/2)(x - u_b)) / ((1 - rho) lambda + gamma/2).
CVector update_xb(const AdmmState& state, const CVector& x0, double rho, double lambda, double gamma);
/// (1/3) sum_i (x_i + u_i).
CVector consensus_update(const AdmmState& state);
/// Entrywise x_n <- c x_n / |x_n|, zero entries map to +c.
Waveform project_cm(const CVector& x, double total_power, int tx, int symbols);
/// u_i <- u_i + (x_i - x).
void dual_update(AdmmState& state);
/// r = sum_i ||x_i - x||, s = gamma ||x - x_prev||.
std::pair<double, double> residuals(const AdmmState& state, const CVector& x_prev, double gamma);

struct AdmmTraceRow {
  int iter = 0;
  double r_primal = 0.0;
  double s_dual = 0.0;
  double objective = 0.0;
  double mui = 0.0;
  double sinr_db = 0.0;
};

struct AdmmOptions {
  /// Disabling the projection turns the iteration into plain convex consensus
  /// ADMM; used to check convergence of the unconstrained splitting.
  bool project = true;
  /// Stop on (r <= eps_p) OR (s <= eps_d) instead of AND.
  std::optional<bool> paper_stopping;
  bool record_trace = true;
};

struct AdmmSolution {
  Waveform x;
  std::vector<AdmmTraceRow> trace;
  AdmmState state;
  int iterations = 0;
  bool converged = false;
};

/// Runs local updates, consensus, projection, dual update and the stopping
/// check until the residual criterion holds or max_inner is reached.
/// Throws DivergenceError on non-finite iterates.
AdmmSolution solve_waveform(const Waveform& x_init, const ReceiveFilter& filter, const Scenario& scenario,
                            const Channel& channel, const SymbolMatrix& symbols, const Waveform& reference,
                            const AdmmOptions& options = {});

}  // namespace isac
