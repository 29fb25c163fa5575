#pragma once

#include <optional>
#include <string>

#include "lrsdp/hlr.hpp"
#include "lrsdp/sdp_instance.hpp"
#include "lrsdp/trace.hpp"

namespace lrsdp {

struct SolverConfig {
  double eps = 1e-5;        // relative tolerance on all three residuals
  double beta0 = 0.0;       // initial penalty; 0 = 10 * max(1, 1/||b||_2)
  double beta_growth = 2.0; // applied when feasibility stalls
  double eps0 = 0.0;        // initial inner tolerance; 0 = 1e-2 * (1+||b||_1)
  double eps_decay = 0.5;
  double eps_floor = 0.0;   // 0 = eps * (1+||b||_1) / 10
  int max_outer = 500;
  double time_limit = 3600.0;  // seconds
  std::uint64_t seed = 0;
  EigSettings eig;
  AippParams aipp;
  int max_fw_steps = 500;
  bool deterministic = false;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

enum class SolveStatus {
  kOptimal,
  kIterationLimit,
  kTimeLimit,
  kNumericalFailure,
};

std::string to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::kIterationLimit;
  double pval = 0.0;  // original units
  double dval = 0.0;  // original units, -b^T p - tau*theta
  double dval_no_theta = 0.0;  // original units, -b^T p
  double rel_pfeas = 0.0;
  double rel_gap = 0.0;
  double rel_dfeas = 0.0;
  Index rank = 0;
  int outer_iters = 0;
  int fw_steps = 0;
  long aipp_iters = 0;
  long fista_iters = 0;
  long eig_products = 0;
  double wall_seconds = 0.0;
  std::string message;

  // Solution in scaled units: X = tau * U U^T, dual slack C + A*p + theta I.
  Factor U;
  DualState dual;
  double tau = 1.0;
};

struct ScaledInstance {
  SdpInstance inst;  // tau = 1, b divided by the original trace bound
  double tau_orig = 1.0;
};

// Change of variables X <- X/tau, b <- b/tau; operators are shared with the
// original instance. Reported primal/dual values are rescaled by tau_orig.
ScaledInstance scale_instance(const SdpInstance& inst);

// p + beta * (A(UU^T) - b)
Vector multiplier_update(const Vector& p, double beta,
                         const Vector& primal_residual);

struct TerminationTerms {
  double rel_pfeas = 0.0;
  double rel_gap = 0.0;
  double rel_dfeas = 0.0;
  double pval = 0.0;          // scaled units
  double dval = 0.0;          // scaled units, -b^T p - theta
  double dual_lambda_min = 0.0;  // lambda_min(C + A*p)
  long eig_products = 0;
  bool eig_trusted = true;
  bool done = false;
};

// The three ratios of the relative termination measure, evaluated for the
// given primal/dual pair on a (scaled) instance. done requires all three
// <= eps and a trusted eigensolve of the dual slack.
TerminationTerms check_termination(const SdpInstance& inst, const Factor& U,
                                   const Vector& p, double theta,
                                   const EigSettings& eig, double eps);

SolveReport solve(const SdpInstance& inst, const SolverConfig& cfg,
                  const TraceSink& sink = nullptr);

// Warm-started variant; U0 must satisfy the scaled ball constraint.
SolveReport solve(const SdpInstance& inst, const SolverConfig& cfg,
                  const Factor& U0, const Vector& p0,
                  const TraceSink& sink = nullptr);

}  // namespace lrsdp
