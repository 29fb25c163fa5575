#include "lrsdp/adap_fista.hpp"

#include <cmath>

namespace lrsdp {

void FistaParams::validate() const {
  require(sigma > 0 && sigma < 0.5, "fista: sigma must lie in (0, 1/2)");
  require(chi > 0 && chi < 1, "fista: chi must lie in (0, 1)");
  require(mu > 0, "fista: mu must be positive");
  require(L0 > mu, "fista: L0 must exceed mu");
}

FistaResult fista_run(const SmoothFn& psi_s, const Matrix& x0,
                      const FistaParams& params) {
  params.validate();
  require(x0.norm() <= 1.0 + 1e-12, "fista: x0 outside the unit ball");

  const double mu = params.mu;
  const double chi = params.chi;
  const double sigma = params.sigma;

  double A = 0.0;
  double tau = 1.0;
  double L = params.L0;
  Matrix x = x0;
  Matrix y = x0;

  FistaResult out;
  for (int i = 0;; ++i) {
    const int cap =
        params.max_iters > 0
            ? params.max_iters
            : 50 + static_cast<int>(10.0 * std::sqrt(L / mu) *
                                    std::log2(4.0 + L / params.L0));
    if (i >= cap) {
      out.status = FistaStatus::kIterLimit;
      out.y = y;
      out.v = Matrix::Zero(x0.rows(), x0.cols());
      out.L = L;
      out.iters = i;
      return out;
    }

    // curvature line search; a and the interpolation point move with L
    double a, psi_tilde, psi_next;
    Matrix x_tilde, grad_tilde, y_next;
    for (;;) {
      a = (tau + std::sqrt(tau * tau + 4.0 * tau * A * (L - mu))) /
          (2.0 * (L - mu));
      x_tilde = (A * y + a * x) / (A + a);
      std::tie(psi_tilde, grad_tilde) = psi_s.eval(x_tilde);
      y_next = project_ball(x_tilde - grad_tilde / L).U;
      psi_next = psi_s.value(y_next);
      const double dsq = (y_next - x_tilde).squaredNorm();
      const double linear =
          psi_tilde + grad_tilde.cwiseProduct(y_next - x_tilde).sum();
      // absolute noise floor: the test compares differences of O(|psi|)
      // quantities, which is meaningless below rounding error
      const double noise =
          1e-14 * (std::abs(psi_next) + std::abs(psi_tilde) + 1.0);
      if (linear + (1.0 - chi) * L / 4.0 * dsq >= psi_next - noise) break;
      L *= 2.0;
      if (L > 1e18)
        throw NumericalError("fista: curvature estimate diverged");
    }

    const double A_next = A + a;
    tau += a * mu;
    const Matrix s = (L - mu) * (x_tilde - y_next);
    x = (mu * a * y_next + (tau - a * mu) * x - a * s) / tau;

    const double dist0_sq = (y_next - x0).squaredNorm();
    if (dist0_sq < chi * A_next * L * (y_next - x_tilde).squaredNorm()) {
      out.status = FistaStatus::kFailure;
      out.y = y_next;
      out.v = Matrix::Zero(x0.rows(), x0.cols());
      out.L = L;
      out.psi_y = psi_next;
      out.iters = i + 1;
      out.x_tilde = std::move(x_tilde);
      out.A = A_next;
      return out;
    }

    Matrix grad_y = psi_s.gradient(y_next);
    Matrix v = grad_y - grad_tilde + L * (x_tilde - y_next);
    if (v.norm() <= sigma * std::sqrt(dist0_sq)) {
      out.status = FistaStatus::kSuccess;
      out.y = std::move(y_next);
      out.v = std::move(v);
      out.L = L;
      out.psi_y = psi_next;
      out.iters = i + 1;
      out.x_tilde = std::move(x_tilde);
      out.A = A_next;
      return out;
    }

    A = A_next;
    y = std::move(y_next);
  }
}

}  // namespace lrsdp
