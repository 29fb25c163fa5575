#pragma once

#include <chrono>
#include <optional>

#include "lrsdp/adap_aipp.hpp"
#include "lrsdp/lanczos.hpp"
#include "lrsdp/sdp_instance.hpp"
#include "lrsdp/trace.hpp"

namespace lrsdp {

struct HlrStats {
  int aipp_calls = 0;
  long aipp_iters = 0;
  long fista_iters = 0;
  long eig_products = 0;
  int fw_steps = 0;
};

enum class HlrStatus { kConverged, kStepLimit, kTimeLimit };

struct HlrOutcome {
  Factor U;              // accepted stationary point
  double theta = 0.0;    // spectraplex multiplier, max{-lambda_min(G), 0}
  double gap = 0.0;      // final duality-gap value (G Y).Y + theta
  double lambda_min = 0.0;  // lambda_min(G) estimate at exit
  double al_val = 0.0;   // augmented Lagrangian value at U
  double cdot = 0.0;     // C . UU^T at exit
  Vector residual;       // A(UU^T) - b at exit
  bool eig_trusted = true;  // false if the eigensolver soft-failed
  HlrStats stats;
  HlrStatus status = HlrStatus::kConverged;

  bool converged() const { return status == HlrStatus::kConverged; }
};

struct HlrSettings {
  EigSettings eig;     // tol is overridden to 0.1 * eps_t per call
  AippParams aipp;     // rho is overridden to eps_t per call
  int max_fw_steps = 500;
  int outer_iter = 0;  // annotation for trace events
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Duality gap of min G.X over the spectraplex at X = YY^T:
// (G Y).Y + theta, nonnegative up to eigensolver tolerance.
double fw_gap(const GradientOperator& G, const Factor& Y, double theta);

struct EscapeDirection {
  double theta = 0.0;
  Vector y;              // unit vector when theta > 0, zero vector otherwise
  double lambda_min = 0.0;
  double eig_residual = 0.0;
  int eig_products = 0;
  bool eig_trusted = true;
};

// Minimum eigenpair of G mapped to the spectraplex escape vertex:
// theta = max{-lambda_min(G), 0}, y = v_min when theta > 0 else 0.
EscapeDirection escape_direction(const GradientOperator& G, Index n,
                                 const EigSettings& cfg);

// Exact minimizer over [0,1] of the augmented Lagrangian along the segment
// X(alpha) = (1-alpha) YY^T + alpha yy^T.
double fw_stepsize(const SdpInstance& inst, const Factor& Y, const Vector& y,
                   double theta, const Vector& p, double beta);

// U-space update realizing the Frank-Wolfe step: alpha = 1 collapses to the
// rank-one factor (y), otherwise appends sqrt(alpha) y to sqrt(1-alpha) Y.
Factor rank_update(const Factor& Y, const Vector& y, double alpha);

// Hybrid low-rank solve of min L_beta(UU^T; p) over the unit ball to duality
// gap <= eps_t: alternates stationary-point computation with rank-one
// escape steps until the gap test passes.
HlrOutcome hlr_solve(const SdpInstance& inst, Factor U_init, const Vector& p,
                     double beta, double eps_t, const HlrSettings& settings,
                     const TraceSink& sink = nullptr);

}  // namespace lrsdp
