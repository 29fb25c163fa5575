#include "lrsdp/hlr.hpp"

#include <algorithm>
#include <cmath>

namespace lrsdp {

double fw_gap(const GradientOperator& G, const Factor& Y, double theta) {
  return G.apply(Y.U).cwiseProduct(Y.U).sum() + theta;
}

EscapeDirection escape_direction(const GradientOperator& G, Index n,
                                 const EigSettings& cfg) {
  EigResult eig = min_eigenpair(
      [&G](const Vector& v) { return G.apply_vec(v); }, n, cfg);
  EscapeDirection out;
  out.lambda_min = eig.lambda;
  out.eig_residual = eig.residual;
  out.eig_products = eig.matvecs;
  out.eig_trusted = eig.converged;
  if (eig.lambda < 0) {
    out.theta = -eig.lambda;
    out.y = std::move(eig.v);
  } else {
    out.theta = 0.0;
    out.y = Vector::Zero(n);
  }
  return out;
}

double fw_stepsize(const SdpInstance& inst, const Factor& Y, const Vector& y,
                   double theta, const Vector& p, double beta) {
  require(y.size() == inst.n, "fw_stepsize: y has the wrong length");
  const GradientOperator G(inst, Y.U, p, beta);
  const double numer = fw_gap(G, Y, theta);
  // y = 0 is the zero vertex of the spectraplex; A(yy^T) vanishes
  const Vector map_y = inst.apply_map(Matrix(y));
  const Vector map_Y = G.residual() + inst.b;  // A(YY^T)
  const double denom = beta * (map_Y - map_y).squaredNorm();
  // Degenerate segment: the 1-D objective is linear, so the minimizer over
  // [0,1] is an endpoint picked by the sign of the slope.
  if (denom <= 1e-14) return numer > 0 ? 1.0 : 0.0;
  return std::clamp(numer / denom, 0.0, 1.0);
}

Factor rank_update(const Factor& Y, const Vector& y, double alpha) {
  require(alpha >= 0.0 && alpha <= 1.0, "rank_update: alpha outside [0,1]");
  if (alpha == 1.0) return Factor(Matrix(y));
  Matrix out(Y.U.rows(), Y.U.cols() + 1);
  out.leftCols(Y.U.cols()) = std::sqrt(1.0 - alpha) * Y.U;
  out.col(Y.U.cols()) = std::sqrt(alpha) * y;
  return Factor(std::move(out));
}

HlrOutcome hlr_solve(const SdpInstance& inst, Factor U_init, const Vector& p,
                     double beta, double eps_t, const HlrSettings& settings,
                     const TraceSink& sink) {
  require(eps_t > 0, "hlr_solve: eps_t must be positive");
  inst.check_factor_dims(U_init.U, "hlr_solve");
  require(U_init.in_unit_ball(), "hlr_solve: start factor outside unit ball");

  AlFunction al(inst, p, beta);
  SmoothFn g;
  g.value = [&al](const Matrix& u) { return al.value(u); };
  g.gradient = [&al](const Matrix& u) { return al.gradient(u); };
  g.value_and_gradient = [&al](const Matrix& u) {
    return al.value_and_gradient(u);
  };

  AippParams aipp = settings.aipp;
  aipp.rho = eps_t;
  EigSettings eig = settings.eig;
  eig.tol = 0.1 * eps_t;

  HlrOutcome out;
  Factor Y_tilde = std::move(U_init);

  for (int step = 0;; ++step) {
    AippResult stat = aipp_run(g, Y_tilde.U, aipp);
    ++out.stats.aipp_calls;
    out.stats.aipp_iters += stat.prox_iters;
    out.stats.fista_iters += stat.fista_iters;
    Factor Y(std::move(stat.W));

    GradientOperator G(inst, Y.U, p, beta);
    EscapeDirection esc = escape_direction(G, inst.n, eig);
    out.stats.eig_products += esc.eig_products;

    const double gap = fw_gap(G, Y, esc.theta);

    if (sink) {
      TraceEvent ev;
      ev.kind = TraceEvent::Kind::kInnerStationary;
      ev.outer_iter = settings.outer_iter;
      ev.beta = beta;
      ev.eps_inner = eps_t;
      ev.gap = gap;
      ev.theta = esc.theta;
      ev.rank = Y.rank();
      ev.al_value = stat.g_value;
      sink(ev);
    }

    const bool done = gap <= eps_t;
    const bool out_of_steps = step >= settings.max_fw_steps;
    const bool out_of_time =
        settings.deadline &&
        std::chrono::steady_clock::now() >= *settings.deadline;
    if (done || out_of_steps || out_of_time || !esc.eig_trusted) {
      out.U = std::move(Y);
      out.theta = esc.theta;
      out.gap = gap;
      out.lambda_min = esc.lambda_min;
      out.al_val = stat.g_value;
      out.residual = G.residual();
      out.cdot = stat.g_value - p.dot(out.residual) -
                 0.5 * beta * out.residual.squaredNorm();
      out.eig_trusted = esc.eig_trusted;
      out.status = done          ? HlrStatus::kConverged
                   : out_of_time ? HlrStatus::kTimeLimit
                                 : HlrStatus::kStepLimit;
      if (!esc.eig_trusted && !done) out.status = HlrStatus::kStepLimit;
      return out;
    }

    const double alpha = fw_stepsize(inst, Y, esc.y, esc.theta, p, beta);
    if (esc.theta > 0) {
      Y_tilde = rank_update(Y, esc.y, alpha);
    } else {
      // zero escape vertex: shrink toward the origin without appending a
      // dead zero column
      Y_tilde = alpha == 1.0 ? Factor(Matrix::Zero(inst.n, 1))
                             : Factor(Matrix(std::sqrt(1.0 - alpha) * Y.U));
    }
    ++out.stats.fw_steps;

    if (sink) {
      TraceEvent ev;
      ev.kind = TraceEvent::Kind::kInnerRankStep;
      ev.outer_iter = settings.outer_iter;
      ev.beta = beta;
      ev.eps_inner = eps_t;
      ev.gap = gap;
      ev.theta = esc.theta;
      ev.rank = Y_tilde.rank();
      ev.fw_alpha = alpha;
      ev.al_value = al.value(Y_tilde.U);
      sink(ev);
    }
  }
}

}  // namespace lrsdp
