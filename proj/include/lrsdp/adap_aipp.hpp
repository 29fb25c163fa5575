#pragma once

#include "lrsdp/adap_fista.hpp"
#include "lrsdp/types.hpp"

namespace lrsdp {

struct AippParams {
  double lambda0 = 10.0;  // initial prox stepsize
  double rho = 1e-4;      // target stationarity tolerance
  FistaParams fista;      // sigma/chi/mu; L0 is managed internally
  int max_outer = 2000;
  double lambda_underflow = 1e-12;  // relative to lambda0

  void validate() const;
};

enum class AippStatus { kConverged, kIterLimit, kLambdaUnderflow };

struct AippResult {
  AippStatus status = AippStatus::kConverged;
  Matrix W;          // stationary point in the unit ball
  Matrix R;          // residual in the gradient-plus-normal-cone inclusion
  double R_norm = 0.0;
  double g_value = 0.0;  // objective at W; never exceeds the starting value
  double lambda = 0.0;   // accepted prox stepsize
  int prox_iters = 0;    // accepted prox subproblems
  int fista_iters = 0;   // inner iterations across all attempts

  bool success() const { return status == AippStatus::kConverged; }
};

// Adaptive inexact proximal-point method: produces an approximate stationary
// point of g over the unit Frobenius ball by solving a sequence of prox
// subproblems with fista_run, halving the prox stepsize whenever the inner
// solver fails or the resulting step does not witness enough convexity.
AippResult aipp_run(const SmoothFn& g, const Matrix& W_init,
                    const AippParams& params);

}  // namespace lrsdp
