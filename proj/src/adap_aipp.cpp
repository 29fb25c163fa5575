#include "lrsdp/adap_aipp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lrsdp {

void AippParams::validate() const {
  require(lambda0 > 0, "aipp: lambda0 must be positive");
  require(rho > 0, "aipp: rho must be positive");
  fista.validate();
  require(max_outer >= 1, "aipp: max_outer must be >= 1");
}

namespace {

// psi_s(u) = lambda g(u) + 0.5 ||u - center||_F^2; center must outlive the
// returned object.
SmoothFn make_prox_objective(const SmoothFn* g, double lambda,
                             const Matrix* center) {
  SmoothFn psi;
  psi.value = [g, lambda, center](const Matrix& u) {
    return lambda * g->value(u) + 0.5 * (u - *center).squaredNorm();
  };
  psi.gradient = [g, lambda, center](const Matrix& u) {
    return Matrix(lambda * g->gradient(u) + (u - *center));
  };
  psi.value_and_gradient =
      [g, lambda, center](const Matrix& u) -> std::pair<double, Matrix> {
    auto [gv, gg] = g->eval(u);
    const Matrix d = u - *center;
    return {lambda * gv + 0.5 * d.squaredNorm(), Matrix(lambda * gg + d)};
  };
  return psi;
}

}  // namespace

AippResult aipp_run(const SmoothFn& g, const Matrix& W_init,
                    const AippParams& params) {
  params.validate();
  require(W_init.norm() <= 1.0 + 1e-12, "aipp: W_init outside the unit ball");

  double lambda = params.lambda0;
  double M_bar = 1.0;

  Matrix W_prev = W_init;
  double g_prev = g.value(W_prev);

  AippResult out;
  out.W = W_prev;
  out.R = Matrix::Zero(W_init.rows(), W_init.cols());
  out.R_norm = std::numeric_limits<double>::infinity();
  out.g_value = g_prev;
  out.lambda = lambda;

  for (int j = 1; j <= params.max_outer; ++j) {
    // Solve the prox subproblem, halving lambda until the inner solver
    // succeeds and the accepted step witnesses convexity of the prox
    // objective around the center.
    Matrix W, V;
    double L_out = 0.0, g_W = 0.0;
    for (;;) {
      if (lambda < params.lambda_underflow * params.lambda0) {
        out.status = AippStatus::kLambdaUnderflow;
        return out;
      }
      SmoothFn psi = make_prox_objective(&g, lambda, &W_prev);
      FistaParams fp = params.fista;
      fp.L0 = std::max(1.0, M_bar / 2.0);
      FistaResult res = fista_run(psi, W_prev, fp);
      out.fista_iters += res.iters;
      if (res.success()) {
        const double step_sq = (res.y - W_prev).squaredNorm();
        g_W = (res.psi_y - 0.5 * step_sq) / lambda;
        const double descent = lambda * g_prev - (lambda * g_W + 0.5 * step_sq);
        const double vw = res.v.cwiseProduct(W_prev - res.y).sum();
        if (descent >= vw) {
          W = std::move(res.y);
          V = std::move(res.v);
          L_out = res.L;
          break;
        }
      }
      lambda /= 2.0;
    }

    M_bar = L_out;
    Matrix R = (V + W_prev - W) / lambda;
    const double R_norm = R.norm();
    ++out.prox_iters;

    if (R_norm <= params.rho) {
      out.status = AippStatus::kConverged;
      out.W = std::move(W);
      out.R = std::move(R);
      out.R_norm = R_norm;
      out.g_value = g_W;
      out.lambda = lambda;
      return out;
    }
    if (R_norm < out.R_norm) {
      out.W = W;
      out.R = R;
      out.R_norm = R_norm;
      out.g_value = g_W;
      out.lambda = lambda;
    }
    W_prev = std::move(W);
    g_prev = g_W;
  }

  out.status = AippStatus::kIterLimit;
  return out;
}

}  // namespace lrsdp
