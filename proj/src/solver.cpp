#include "lrsdp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "lrsdp/rng.hpp"

namespace lrsdp {

void SolverConfig::validate() const {
  require(eps > 0, "config: eps must be positive");
  require(beta_growth >= 1.0, "config: beta_growth must be >= 1");
  require(eps_decay > 0 && eps_decay <= 1.0, "config: eps_decay in (0,1]");
  require(max_outer >= 1, "config: max_outer must be >= 1");
  require(time_limit > 0, "config: time_limit must be positive");
  require(max_fw_steps >= 1, "config: max_fw_steps must be >= 1");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kIterationLimit: return "iteration_limit";
    case SolveStatus::kTimeLimit: return "time_limit";
    case SolveStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

ScaledInstance scale_instance(const SdpInstance& inst) {
  inst.validate();
  ScaledInstance out;
  out.inst = inst;
  out.tau_orig = inst.tau;
  if (inst.tau != 1.0) {
    out.inst.b = inst.b / inst.tau;
    out.inst.norm_b1 = inst.norm_b1 / inst.tau;
    out.inst.tau = 1.0;
  }
  return out;
}

Vector multiplier_update(const Vector& p, double beta,
                         const Vector& primal_residual) {
  require(p.size() == primal_residual.size(),
          "multiplier_update: length mismatch");
  return p + beta * primal_residual;
}

TerminationTerms check_termination(const SdpInstance& inst, const Factor& U,
                                   const Vector& p, double theta,
                                   const EigSettings& eig, double eps) {
  inst.check_factor_dims(U.U, "check_termination");
  TerminationTerms t;
  const Vector r = inst.apply_map(U.U) - inst.b;
  t.rel_pfeas = r.norm() / (1.0 + inst.norm_b1);
  t.pval = inst.apply_C(U.U).cwiseProduct(U.U).sum();
  t.dval = -inst.b.dot(p) - theta;
  t.rel_gap =
      std::abs(t.pval - t.dval) / (1.0 + std::abs(t.pval) + std::abs(t.dval));

  EigResult dual_eig = min_eigenpair(
      [&inst, &p](const Vector& v) {
        return Vector(inst.C_plus_adjoint(p, Matrix(v)).col(0));
      },
      inst.n, eig);
  t.dual_lambda_min = dual_eig.lambda;
  t.eig_products = dual_eig.matvecs;
  t.eig_trusted = dual_eig.converged;
  t.rel_dfeas = std::max(0.0, -t.dual_lambda_min) / (1.0 + inst.norm_C1);

  t.done = t.eig_trusted && t.rel_pfeas <= eps && t.rel_gap <= eps &&
           t.rel_dfeas <= eps;
  return t;
}

namespace {

struct CertifiedTerms {
  TerminationTerms terms;
  Vector p;
  double theta = 0.0;
};

// Evaluate the termination measure for the best dual representative of
// (p, theta). When the instance carries an identity (trace) constraint A_k,
// theta and any measured slack deficit are folded into p_k: this leaves the
// dual slack operator C + A*p + theta I unchanged (and, with the usual
// rhs b_k = 1, the dual value too) while making C + A*p itself psd. Without
// such a constraint, theta is re-tightened to max{0, -lambda_min(C + A*p)}.
CertifiedTerms certify(const SdpInstance& inst, const Factor& U,
                       const Vector& p, double theta, const EigSettings& eig,
                       double eps) {
  CertifiedTerms ct;
  ct.p = p;
  ct.theta = theta;
  if (inst.identity_constraint && theta > 0) {
    ct.p(*inst.identity_constraint) += theta;
    ct.theta = 0.0;
  }
  ct.terms = check_termination(inst, U, ct.p, ct.theta, eig, eps);
  if (!ct.terms.eig_trusted) return ct;

  TerminationTerms& t = ct.terms;
  if (inst.identity_constraint) {
    if (t.dual_lambda_min < 0) {
      ct.p(*inst.identity_constraint) -= t.dual_lambda_min;
      t.dval += t.dual_lambda_min * inst.b(*inst.identity_constraint);
      t.dual_lambda_min = 0.0;
      t.rel_dfeas = 0.0;
    }
  } else {
    const double tight = std::max(0.0, -t.dual_lambda_min);
    t.dval += ct.theta - tight;
    ct.theta = tight;
  }
  t.rel_gap =
      std::abs(t.pval - t.dval) / (1.0 + std::abs(t.pval) + std::abs(t.dval));
  t.done = t.rel_pfeas <= eps && t.rel_gap <= eps && t.rel_dfeas <= eps;
  return ct;
}

}  // namespace

SolveReport solve(const SdpInstance& inst, const SolverConfig& cfg,
                  const TraceSink& sink) {
  cfg.validate();
  inst.validate();
  Rng rng(cfg.seed);
  Vector u0 = gaussian_vector(inst.n, rng);
  Factor U0(Matrix(u0 / u0.norm()));
  return solve(inst, cfg, U0, Vector::Zero(inst.m), sink);
}

SolveReport solve(const SdpInstance& inst, const SolverConfig& cfg,
                  const Factor& U0, const Vector& p0, const TraceSink& sink) {
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  const auto deadline =
      t_start + std::chrono::duration_cast<clock::duration>(
                    std::chrono::duration<double>(cfg.time_limit));

  cfg.validate();
  inst.validate();

  ScaledInstance scaled = scale_instance(inst);
  const SdpInstance& si = scaled.inst;
  const double tau = scaled.tau_orig;
  const double nb1 = si.norm_b1;
  const double nb2 = si.b.norm();

  const double eps_floor =
      cfg.eps_floor > 0 ? cfg.eps_floor : cfg.eps * (1.0 + nb1) / 10.0;
  double eps_t = cfg.eps0 > 0 ? cfg.eps0 : 1e-2 * (1.0 + nb1);
  eps_t = std::max(eps_t, eps_floor);
  double beta = cfg.beta0 > 0
                    ? cfg.beta0
                    : 10.0 * std::max(1.0, nb2 > 0 ? 1.0 / nb2 : 1.0);

  SolveReport rep;
  rep.tau = tau;
  rep.U = U0;
  require(rep.U.in_unit_ball(), "solve: warm-start factor outside unit ball");
  rep.dual.p = p0;
  require(rep.dual.p.size() == si.m, "solve: warm-start multiplier length");

  EigSettings eig_term = cfg.eig;
  eig_term.tol = std::min(cfg.eig.tol, 1e-7);
  eig_term.seed = cfg.seed;

  std::optional<CertifiedTerms> final_ct;
  double prev_pfeas = std::numeric_limits<double>::infinity();

  auto finish = [&](SolveStatus status) -> SolveReport {
    rep.status = status;
    if (!final_ct) {
      if (!rep.U.U.allFinite() || !rep.dual.p.allFinite()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rep.rel_pfeas = rep.rel_gap = rep.rel_dfeas = nan;
        rep.pval = rep.dval = rep.dval_no_theta = nan;
        rep.rank = rep.U.rank();
        rep.wall_seconds =
            std::chrono::duration<double>(clock::now() - t_start).count();
        return rep;
      }
      final_ct =
          certify(si, rep.U, rep.dual.p, rep.dual.theta, eig_term, cfg.eps);
      rep.eig_products += final_ct->terms.eig_products;
    }
    rep.dual = DualState{final_ct->p, final_ct->theta};
    rep.rel_pfeas = final_ct->terms.rel_pfeas;
    rep.rel_gap = final_ct->terms.rel_gap;
    rep.rel_dfeas = final_ct->terms.rel_dfeas;
    rep.pval = tau * final_ct->terms.pval;
    rep.dval = tau * final_ct->terms.dval;
    rep.dval_no_theta = tau * -si.b.dot(rep.dual.p);
    rep.rank = rep.U.rank();
    rep.wall_seconds =
        std::chrono::duration<double>(clock::now() - t_start).count();
    return rep;
  };

  try {
    for (int t = 1; t <= cfg.max_outer; ++t) {
      if (clock::now() >= deadline) return finish(SolveStatus::kTimeLimit);

      HlrSettings hs;
      hs.eig = cfg.eig;
      hs.eig.seed = cfg.seed;
      hs.aipp = cfg.aipp;
      hs.max_fw_steps = cfg.max_fw_steps;
      hs.outer_iter = t;
      hs.deadline = deadline;

      HlrOutcome out = hlr_solve(si, rep.U, rep.dual.p, beta, eps_t, hs, sink);
      rep.outer_iters = t;
      rep.fw_steps += out.stats.fw_steps;
      rep.aipp_iters += out.stats.aipp_iters;
      rep.fista_iters += out.stats.fista_iters;
      rep.eig_products += out.stats.eig_products;

      rep.U = std::move(out.U);
      rep.dual.p = multiplier_update(rep.dual.p, beta, out.residual);
      rep.dual.theta = out.theta;
      if (!rep.U.U.allFinite() || !rep.dual.p.allFinite()) {
        rep.message = "non-finite iterate";
        return finish(SolveStatus::kNumericalFailure);
      }

      const double rel_pfeas = out.residual.norm() / (1.0 + nb1);
      const double pval = out.cdot;
      const double dval = -si.b.dot(rep.dual.p) - out.theta;
      const double rel_gap =
          std::abs(pval - dval) / (1.0 + std::abs(pval) + std::abs(dval));
      // lambda_min(C + A*p_t) coincides with the inner eigensolve estimate;
      // folding theta into a trace constraint shifts it by theta.
      const double lam_folded =
          si.identity_constraint ? out.lambda_min + out.theta : out.lambda_min;
      const double rel_dfeas_est =
          std::max(0.0, -lam_folded) / (1.0 + si.norm_C1);

      if (sink) {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::kOuter;
        ev.outer_iter = t;
        ev.beta = beta;
        ev.eps_inner = eps_t;
        ev.gap = out.gap;
        ev.theta = out.theta;
        ev.rank = rep.U.rank();
        ev.al_value = out.al_val;
        ev.rel_pfeas = rel_pfeas;
        ev.rel_gap = rel_gap;
        ev.rel_dfeas = rel_dfeas_est;
        sink(ev);
      }

      if (out.eig_trusted && rel_pfeas <= cfg.eps && rel_gap <= cfg.eps &&
          rel_dfeas_est <= cfg.eps) {
        CertifiedTerms ct =
            certify(si, rep.U, rep.dual.p, rep.dual.theta, eig_term, cfg.eps);
        rep.eig_products += ct.terms.eig_products;
        if (ct.terms.done) {
          final_ct = std::move(ct);
          return finish(SolveStatus::kOptimal);
        }
      }

      if (rel_pfeas > 0.9 * prev_pfeas) beta *= cfg.beta_growth;
      prev_pfeas = rel_pfeas;
      eps_t = std::max(eps_floor, eps_t * cfg.eps_decay);
    }
  } catch (const NumericalError& e) {
    rep.message = e.what();
    return finish(SolveStatus::kNumericalFailure);
  }
  return finish(SolveStatus::kIterationLimit);
}

}  // namespace lrsdp
