#pragma once

#include <cstdint>
#include <functional>

#include "lrsdp/types.hpp"

namespace lrsdp {

using LinOp = std::function<Vector(const Vector&)>;

struct EigSettings {
  double tol = 1e-8;        // residual tolerance, ||op(v) - lambda v|| <= tol*max(1,|lambda|)
  int max_iters = 5000;     // cap on operator applications
  int block_restart = 30;   // Krylov dimension kept in memory before a restart
  std::uint64_t seed = 0;   // start-vector seed

  void validate() const;
};

struct EigResult {
  double lambda = 0.0;   // minimum-eigenvalue estimate (= Rayleigh quotient of v)
  Vector v;              // unit vector
  double residual = 0.0; // achieved ||op(v) - lambda v||
  int matvecs = 0;
  bool converged = false;
};

// Minimum eigenpair of an implicit symmetric operator via thick-restart
// Lanczos on -op with full reorthogonalization inside the restart window.
// Non-convergence within max_iters is a soft failure: the best pair found is
// returned with converged = false and the caller decides.
EigResult min_eigenpair(const LinOp& op, Index n, const EigSettings& cfg);

}  // namespace lrsdp
