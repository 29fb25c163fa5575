#include "lrsdp/lanczos.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "lrsdp/rng.hpp"

namespace lrsdp {

void EigSettings::validate() const {
  require(tol > 0, "eig: tol must be positive");
  require(block_restart >= 2, "eig: block_restart must be >= 2");
  require(max_iters >= block_restart, "eig: max_iters < block_restart");
}

namespace {

// Two classical Gram-Schmidt sweeps against the first k columns of V,
// accumulating coefficients into h.
void orthogonalize(const Matrix& V, Index k, Vector& w, Vector& h) {
  h = V.leftCols(k).transpose() * w;
  w.noalias() -= V.leftCols(k) * h;
  Vector h2 = V.leftCols(k).transpose() * w;
  w.noalias() -= V.leftCols(k) * h2;
  h += h2;
}

}  // namespace

EigResult min_eigenpair(const LinOp& op, Index n, const EigSettings& cfg) {
  cfg.validate();
  require(n >= 1, "min_eigenpair: dimension must be >= 1");

  // Work with B = -op and seek its largest eigenpair; Ritz values then
  // approach lambda_max(B) from below, i.e. lambda_min(op) from above.
  auto apply_B = [&op](const Vector& v) -> Vector { return -op(v); };

  const Index kmax = std::min<Index>(cfg.block_restart, n);
  const Index keep = std::max<Index>(1, kmax / 3);

  Matrix V(n, kmax + 1);
  Matrix H = Matrix::Zero(kmax + 1, kmax + 1);

  Rng rng(cfg.seed ^ 0x9b97f4a7c15ULL);
  {
    Vector v0 = gaussian_vector(n, rng);
    V.col(0) = v0 / v0.norm();
  }

  int matvecs = 0;
  Index basis = 1;   // orthonormal vectors held in V
  Index filled = 0;  // columns of H completed
  double beta = 0.0;
  Vector w, h;
  EigResult best;
  best.residual = std::numeric_limits<double>::infinity();

  // Rayleigh quotient + explicit residual for a candidate vector.
  auto measure = [&](Vector x) -> EigResult {
    EigResult out;
    x /= x.norm();
    Vector Bx = apply_B(x);
    ++matvecs;
    const double mu = x.dot(Bx);
    out.lambda = -mu;
    out.v = std::move(x);
    out.residual = (Bx - mu * out.v).norm();
    out.matvecs = matvecs;
    out.converged =
        out.residual <= cfg.tol * std::max(1.0, std::abs(out.lambda));
    return out;
  };

  for (;;) {
    bool breakdown = false;
    while (filled < basis && matvecs < cfg.max_iters) {
      const Index j = filled;
      w = apply_B(V.col(j));
      ++matvecs;
      orthogonalize(V, basis, w, h);
      H.col(j).head(basis) = h;
      H.row(j).head(basis) = h.transpose();
      ++filled;
      beta = w.norm();
      if (beta <= 1e-13 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
        breakdown = true;
        break;
      }
      if (basis < kmax) {
        V.col(basis) = w / beta;
        H(basis, j) = beta;
        H(j, basis) = beta;
        ++basis;
      }
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es(H.topLeftCorner(filled, filled));
    const Index top = filled - 1;  // ascending order; largest is the target
    const double mu = es.eigenvalues()(top);
    const double res_est =
        breakdown ? 0.0 : beta * std::abs(es.eigenvectors()(filled - 1, top));
    const bool budget_left = matvecs + 1 < cfg.max_iters;

    if (res_est <= cfg.tol * std::max(1.0, std::abs(mu)) || !budget_left ||
        (breakdown && filled >= n)) {
      EigResult out =
          measure(V.leftCols(filled) * es.eigenvectors().col(top));
      if (out.residual < best.residual) best = out;
      if (best.converged || matvecs >= cfg.max_iters ||
          (breakdown && filled >= n))
        return best;
      // residual estimate was optimistic; continue via a restart
    }

    // Thick restart: keep the leading Ritz vectors plus the residual
    // direction. Coupling coefficients are recovered automatically by the
    // full reorthogonalization when the next column is added.
    const Index l = std::min(keep, filled - 1 > 0 ? filled - 1 : 1);
    Matrix kept(n, l);
    for (Index i = 0; i < l; ++i)
      kept.col(i) = V.leftCols(filled) * es.eigenvectors().col(filled - 1 - i);
    H.setZero();
    for (Index i = 0; i < l; ++i) H(i, i) = es.eigenvalues()(filled - 1 - i);
    V.leftCols(l) = kept;
    if (breakdown) {
      // hit an invariant subspace early: inject a fresh direction
      Vector f = gaussian_vector(n, rng);
      Vector dummy;
      orthogonalize(V, l, f, dummy);
      const double fn = f.norm();
      if (fn <= 1e-13) return best;
      V.col(l) = f / fn;
    } else {
      V.col(l) = w / beta;
    }
    basis = l + 1;
    filled = l;
  }
}

}  // namespace lrsdp
