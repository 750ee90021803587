// SPDX-License-Identifier: Apache-2.0
#include "isac/admm.hpp"

#include <cmath>
#include <limits>

#include "isac/objective.hpp"

namespace isac {

namespace {

constexpr int kMaxBracketDoublings = 200;
constexpr int kMaxBisectionSteps = 300;

// Factor F with R = F F^H from a dense Hermitian PSD matrix.
CMatrix psd_factor(const CMatrix& R, const char* name) {
  if (R.rows() != R.cols()) throw DimensionError(std::string(name) + " must be square");
  const double scale = std::max(R.norm(), 1.0);
  if ((R - R.adjoint()).norm() > 1e-10 * scale)
    throw ContractViolation(std::string(name) + " is not Hermitian");
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(R);
  const RVector& lambda = eig.eigenvalues();
  const double trace = std::max(R.trace().real(), 0.0);
  if (lambda.size() > 0 && lambda.minCoeff() < -1e-10 * std::max(trace, 1e-300))
    throw ContractViolation(std::string(name) + " is not positive semidefinite");
  const double cutoff = lambda.size() > 0 ? 1e-14 * std::max(lambda.maxCoeff(), 0.0) : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < lambda.size(); ++k)
    if (lambda[k] > cutoff && lambda[k] > 0.0) keep.push_back(k);
  CMatrix F(R.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    F.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(keep[j]) * std::sqrt(lambda[keep[j]]);
  return F;
}

bool all_finite(const AdmmState& s) {
  return s.x.allFinite() && s.xc.allFinite() && s.xs.allFinite() && s.xb.allFinite() && s.uc.allFinite() &&
         s.us.allFinite() && s.ub.allFinite();
}

}  // namespace

AdmmState AdmmState::start(const CVector& x) {
  AdmmState s;
  s.x = x;
  s.xc = s.xs = s.xb = x;
  s.uc = s.us = s.ub = CVector::Zero(x.size());
  return s;
}

// ---------------------------------------------------------------------------
// Communication block

CommBlock::CommBlock(const Channel& channel, const SymbolMatrix& symbols, double rho, double gamma)
    : half_gamma_(0.5 * gamma), tx_(static_cast<int>(channel.H.cols())), symbols_(static_cast<int>(symbols.S.cols())) {
  if (!(gamma > 0.0)) throw ContractViolation("gamma must be > 0");
  if (symbols.S.rows() != channel.H.rows()) throw DimensionError("CommBlock: H and S row counts differ");
  CMatrix normal = rho * channel.H.adjoint() * channel.H;
  normal.diagonal().array() += half_gamma_;
  normal_.compute(normal);
  weighted_rhs_ = rho * channel.H.adjoint() * symbols.S;
}

CVector CommBlock::solve(const CVector& v) const {
  if (v.size() != static_cast<Eigen::Index>(tx_) * symbols_) throw DimensionError("CommBlock: length mismatch");
  Eigen::Map<const CMatrix> V(v.data(), tx_, symbols_);
  const CMatrix rhs = weighted_rhs_ + half_gamma_ * V;
  const CMatrix sol = normal_.solve(rhs);
  return Eigen::Map<const CVector>(sol.data(), sol.size());
}

// ---------------------------------------------------------------------------
// Sensing QCQP block

struct QcqpBlock::Prepared {
  CVector b;      // (gamma/2) v
  CVector g_b;    // [fi ft]^H b
};

QcqpBlock::QcqpBlock(const CMatrix& R_i, const CMatrix& R_t, const Params& params)
    : QcqpBlock(psd_factor(R_i, "R_i"), psd_factor(R_t, "R_t"), params, R_i.rows()) {
  if (R_t.rows() != R_i.rows()) throw DimensionError("R_i and R_t sizes differ");
}

QcqpBlock QcqpBlock::from_factors(CMatrix interference_factor, CMatrix target_factor, const Params& params) {
  const Eigen::Index dim = target_factor.rows();
  if (interference_factor.cols() == 0) interference_factor.resize(dim, 0);
  if (interference_factor.rows() != dim) throw DimensionError("QCQP factor row counts differ");
  return QcqpBlock(std::move(interference_factor), std::move(target_factor), params, dim);
}

QcqpBlock::QcqpBlock(CMatrix fi, CMatrix ft, const Params& params, Eigen::Index dim)
    : fi_(std::move(fi)), ft_(std::move(ft)), params_(params), dim_(dim) {
  if (!(params_.gamma > 0.0)) throw ContractViolation("gamma must be > 0");
  if (!(params_.target_power > 0.0)) throw ContractViolation("target power must be > 0");
  if (params_.rho < 0.0 || params_.rho > 1.0) throw ContractViolation("rho must lie in [0, 1]");
  const Eigen::Index ri = fi_.cols();
  const Eigen::Index rt = ft_.cols();
  low_rank_ = ri + rt < dim_;
  CMatrix G(dim_, ri + rt);
  G << fi_, ft_;
  gram_ = G.adjoint() * G;

  const double alpha = 0.5 * params_.gamma;
  const double wi = 1.0 - params_.rho;
  if (low_rank_) {
    CMatrix c0 = wi * gram_.topLeftCorner(ri, ri);
    c0.diagonal().array() += alpha;
    tau0_.compute(c0);
  } else {
    CMatrix m0 = wi * fi_ * fi_.adjoint();
    m0.diagonal().array() += alpha;
    tau0_.compute(m0);
  }
}

QcqpBlock::Prepared QcqpBlock::prepare(const CVector& v) const {
  Prepared p;
  p.b = 0.5 * params_.gamma * v;
  if (low_rank_) {
    p.g_b.resize(fi_.cols() + ft_.cols());
    p.g_b << fi_.adjoint() * p.b, ft_.adjoint() * p.b;
  }
  return p;
}

CVector QcqpBlock::solve_prepared(double tau, const Prepared& p, double* q_out) const {
  const double alpha = 0.5 * params_.gamma;
  const double wi = 1.0 - params_.rho;
  const Eigen::Index ri = fi_.cols();
  const Eigen::Index rt = ft_.cols();

  if (!low_rank_) {
    CVector x;
    if (tau == 0.0) {
      x = tau0_.solve(p.b);
    } else {
      CMatrix m = wi * fi_ * fi_.adjoint() + tau * ft_ * ft_.adjoint();
      m.diagonal().array() += alpha;
      x = Eigen::LLT<CMatrix>(m).solve(p.b);
    }
    if (q_out) *q_out = q(x);
    return x;
  }

  // (alpha I + G D G^H)^{-1} b = (b - G D^{1/2} (alpha I + D^{1/2} G^H G D^{1/2})^{-1} D^{1/2} G^H b) / alpha
  RVector d(ri + rt);
  d.head(ri).setConstant(std::sqrt(wi));
  d.tail(rt).setConstant(std::sqrt(tau));
  const CVector rhs = d.cwiseProduct(p.g_b);
  CVector y;
  if (tau == 0.0) {
    y.setZero(ri + rt);
    if (ri > 0) y.head(ri) = tau0_.solve(rhs.head(ri));
  } else {
    CMatrix c = d.asDiagonal() * gram_ * d.asDiagonal();
    c.diagonal().array() += alpha;
    y = Eigen::LLT<CMatrix>(c).solve(rhs);
  }
  const CVector dy = d.cwiseProduct(y);
  if (q_out) {
    // F_t^H x computed in the factor space, no length-dim work.
    const CVector ft_x = (p.g_b.tail(rt) - gram_.bottomRows(rt) * dy) / alpha;
    *q_out = ft_x.squaredNorm();
    return {};
  }
  CVector x = p.b;
  if (ri > 0) x.noalias() -= fi_ * dy.head(ri);
  if (rt > 0) x.noalias() -= ft_ * dy.tail(rt);
  return x / alpha;
}

CVector QcqpBlock::solve_at(double tau, const CVector& v) const {
  if (v.size() != dim_) throw DimensionError("QCQP: rhs length mismatch");
  if (tau < 0.0) throw ContractViolation("QCQP multiplier must be >= 0");
  return solve_prepared(tau, prepare(v), nullptr);
}

double QcqpBlock::q(const CVector& x) const { return (ft_.adjoint() * x).squaredNorm(); }

double QcqpBlock::objective(const CVector& x, const CVector& v) const {
  return (1.0 - params_.rho) * (fi_.adjoint() * x).squaredNorm() + 0.5 * params_.gamma * (x - v).squaredNorm();
}

QcqpSolution QcqpBlock::solve(const CVector& v) const {
  if (v.size() != dim_) throw DimensionError("QCQP: rhs length mismatch");
  const Prepared p = prepare(v);
  const double sigma = params_.target_power;
  const double tol = params_.tol_bisect * sigma;

  auto q_at = [&](double tau) {
    double qv = 0.0;
    solve_prepared(tau, p, &qv);
    return qv;
  };

  QcqpSolution out;
  if (q_at(0.0) <= sigma) {
    out.x = solve_prepared(0.0, p, nullptr);
    out.dual = {0.0, q(out.x), 0};
    return out;
  }

  double lo = 0.0;
  double hi = 1.0;
  double q_hi = q_at(hi);
  int doublings = 0;
  while (q_hi >= sigma) {
    lo = hi;
    hi *= 2.0;
    q_hi = q_at(hi);
    if (++doublings > kMaxBracketDoublings || !std::isfinite(q_hi))
      throw ContractViolation("QCQP: failed to bracket the multiplier");
  }

  double tau = hi;
  double q_tau = q_hi;
  int steps = 0;
  while (std::abs(q_tau - sigma) > tol && steps < kMaxBisectionSteps) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket exhausted in floating point
    const double q_mid = q_at(mid);
    ++steps;
    if (q_mid > sigma) {
      lo = mid;
    } else {
      hi = mid;
      tau = mid;
      q_tau = q_mid;
    }
    if (std::abs(q_mid - sigma) <= tol) {
      tau = mid;
      q_tau = q_mid;
      break;
    }
  }
  out.x = solve_prepared(tau, p, nullptr);
  out.dual = {tau, q(out.x), steps};
  return out;
}

// ---------------------------------------------------------------------------
// ADMM steps

CVector update_xc(const AdmmState& state, const CommBlock& block) { return block.solve(state.x - state.uc); }

QcqpSolution update_xs(const AdmmState& state, const QcqpBlock& block) { return block.solve(state.x - state.us); }

CVector update_xb(const AdmmState& state, const CVector& x0, double rho, double lambda, double gamma) {
  const double ws = (1.0 - rho) * lambda;
  const double half_gamma = 0.5 * gamma;
  return (ws * x0 + half_gamma * (state.x - state.ub)) / (ws + half_gamma);
}

CVector consensus_update(const AdmmState& state) {
  return ((state.xc + state.uc) + (state.xs + state.us) + (state.xb + state.ub)) / 3.0;
}

Waveform project_cm(const CVector& x, double total_power, int tx, int symbols) {
  const double c = std::sqrt(total_power / (static_cast<double>(tx) * symbols));
  CVector out(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const double mag = std::abs(x[n]);
    out[n] = mag > 0.0 ? x[n] * (c / mag) : cx{c, 0.0};
  }
  return Waveform(std::move(out), tx, symbols, true);
}

void dual_update(AdmmState& state) {
  state.uc += state.xc - state.x;
  state.us += state.xs - state.x;
  state.ub += state.xb - state.x;
}

std::pair<double, double> residuals(const AdmmState& state, const CVector& x_prev, double gamma) {
  const double r = (state.xc - state.x).norm() + (state.xs - state.x).norm() + (state.xb - state.x).norm();
  const double s = gamma * (state.x - x_prev).norm();
  return {r, s};
}

AdmmSolution solve_waveform(const Waveform& x_init, const ReceiveFilter& filter, const Scenario& scenario,
                            const Channel& channel, const SymbolMatrix& symbols, const Waveform& reference,
                            const AdmmOptions& options) {
  const int T = scenario.tx_antennas;
  const int N = scenario.symbols;
  if (x_init.size() != static_cast<Eigen::Index>(T) * N || reference.size() != x_init.size())
    throw DimensionError("solve_waveform: waveform length must equal T*N");
  const bool disjunction = options.paper_stopping.value_or(scenario.paper_stopping);

  const JointObjective cost(scenario, channel, symbols, filter, reference);
  const CommBlock comm(channel, symbols, scenario.rho, scenario.gamma);
  const SensingMatrices& sensing = cost.sensing();
  const QcqpBlock qcqp = QcqpBlock::from_factors(
      sensing.interference_factor, sensing.target_factor,
      {scenario.target_power, scenario.rho, scenario.gamma, scenario.tol_bisect});

  AdmmSolution sol;
  AdmmState& st = sol.state;
  st = AdmmState::start(x_init.vector());

  for (int t = 0; t < scenario.max_inner; ++t) {
    st.xc = update_xc(st, comm);
    st.xs = update_xs(st, qcqp).x;
    st.xb = update_xb(st, reference.vector(), scenario.rho, scenario.lambda, scenario.gamma);

    const CVector x_prev = st.x;
    st.x = consensus_update(st);
    if (options.project) st.x = project_cm(st.x, scenario.total_power, T, N).vector();
    dual_update(st);

    std::tie(st.r_primal, st.s_dual) = residuals(st, x_prev, scenario.gamma);
    st.iter = t + 1;
    if (!all_finite(st) || !std::isfinite(st.r_primal)) throw DivergenceError("solve_waveform", st.iter);

    if (options.record_trace) {
      const ObjectiveTerms terms = cost.evaluate(st.x);
      sol.trace.push_back({st.iter, st.r_primal, st.s_dual, terms.total, terms.mui, linear_to_db(terms.sinr)});
    }

    const bool primal_ok = st.r_primal <= scenario.eps_primal;
    const bool dual_ok = st.s_dual <= scenario.eps_dual;
    if (disjunction ? (primal_ok || dual_ok) : (primal_ok && dual_ok)) {
      sol.converged = true;
      break;
    }
  }
  sol.iterations = st.iter;
  sol.x = Waveform(st.x, T, N, options.project);
  return sol;
}

}  // namespace isac
