#pragma once

#include <functional>
#include <utility>

#include "lrsdp/sdp_instance.hpp"
#include "lrsdp/types.hpp"

namespace lrsdp {

// Smooth objective over matrices: value, gradient, and optionally a fused
// evaluation that shares work between the two.
struct SmoothFn {
  std::function<double(const Matrix&)> value;
  std::function<Matrix(const Matrix&)> gradient;
  std::function<std::pair<double, Matrix>(const Matrix&)> value_and_gradient;

  std::pair<double, Matrix> eval(const Matrix& x) const {
    if (value_and_gradient) return value_and_gradient(x);
    return {value(x), gradient(x)};
  }
};

struct FistaParams {
  double sigma = 0.3;  // success threshold, in (0, 1/2)
  double chi = 0.5;    // line-search slack, in (0, 1)
  double mu = 0.5;     // strong-convexity estimate
  double L0 = 1.0;     // initial curvature estimate, > mu
  int max_iters = 0;   // 0 = adaptive cap ~ 10 sqrt(L/mu) log(L/L0)

  void validate() const;
};

enum class FistaStatus {
  kSuccess,
  kFailure,      // the accumulated-progress test failed: not enough convexity
  kIterLimit,    // safety cap; treated as a failure by callers
};

struct FistaResult {
  FistaStatus status = FistaStatus::kFailure;
  Matrix y;         // candidate solution in the unit ball
  Matrix v;         // stationarity residual, ||v|| <= sigma ||y - x0|| on success
  double L = 0.0;   // final curvature estimate
  double psi_y = 0.0;  // objective value at y
  int iters = 0;
  // Final interpolation point and accumulator, kept so callers can re-verify
  // the exit tests from scratch.
  Matrix x_tilde;
  double A = 0.0;

  bool success() const { return status == FistaStatus::kSuccess; }
};

// Accelerated composite gradient method for min psi_s(u) over the unit
// Frobenius ball, with a doubling line search on the curvature estimate and
// an explicit failure exit that flags insufficient convexity of psi_s.
FistaResult fista_run(const SmoothFn& psi_s, const Matrix& x0,
                      const FistaParams& params);

}  // namespace lrsdp
