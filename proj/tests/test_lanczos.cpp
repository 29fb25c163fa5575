#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "lrsdp/lanczos.hpp"
#include "lrsdp/rng.hpp"
#include "support/oracles.hpp"

using namespace lrsdp;

namespace {

LinOp dense_op(const Matrix& A) {
  return [A](const Vector& v) -> Vector { return A * v; };
}

}  // namespace

TEST_CASE("min_eigenpair on diag(1, -2)") {
  Matrix A = Matrix::Zero(2, 2);
  A(0, 0) = 1.0;
  A(1, 1) = -2.0;
  EigSettings cfg;
  cfg.tol = 1e-10;
  const EigResult r = min_eigenpair(dense_op(A), 2, cfg);
  CHECK(r.converged);
  CHECK(r.lambda == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(std::abs(r.v(1)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(r.v(0)) <= 1e-8);
}

TEST_CASE("min_eigenpair on the 2x2 exchange matrix") {
  Matrix A(2, 2);
  A << 0, 1, 1, 0;
  EigSettings cfg;
  cfg.tol = 1e-10;
  const EigResult r = min_eigenpair(dense_op(A), 2, cfg);
  CHECK(r.converged);
  CHECK(r.lambda == doctest::Approx(-1.0).epsilon(1e-10));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(r.v(0)) - inv_sqrt2) <= 1e-8);
  CHECK(r.v(0) * r.v(1) < 0.0);  // components have opposite signs
}

TEST_CASE("min_eigenpair matches a dense eigendecomposition at n = 50") {
  for (std::uint64_t seed : {10, 20, 30}) {
    Rng rng(seed);
    const Matrix A = testsupport::random_symmetric(50, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    EigSettings cfg;
    cfg.tol = 1e-10;
    cfg.seed = seed;
    const EigResult r = min_eigenpair(dense_op(A), 50, cfg);
    CHECK(r.converged);
    CHECK(std::abs(r.lambda - es.eigenvalues()(0)) <= 1e-8);
    CHECK(r.v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((A * r.v - r.lambda * r.v).norm() <= cfg.tol * 10);
  }
}

TEST_CASE("restarting still converges when the window is small") {
  Rng rng(3);
  const Matrix A = testsupport::random_symmetric(120, rng);
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  EigSettings cfg;
  cfg.tol = 1e-9;
  cfg.block_restart = 8;  // force many restarts
  const EigResult r = min_eigenpair(dense_op(A), 120, cfg);
  CHECK(r.converged);
  CHECK(std::abs(r.lambda - es.eigenvalues()(0)) <= 1e-7);
}

TEST_CASE("degenerate minimum eigenvalue is resolved to tolerance") {
  // lambda_min = -1 with multiplicity 2
  Matrix A = Matrix::Zero(6, 6);
  A.diagonal() << -1, -1, 0.5, 1, 2, 3;
  EigSettings cfg;
  cfg.tol = 1e-10;
  const EigResult r = min_eigenpair(dense_op(A), 6, cfg);
  CHECK(r.converged);
  CHECK(r.lambda == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(r.v(0)) * std::abs(r.v(0)) + std::abs(r.v(1)) * std::abs(r.v(1)) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("n = 1 operator") {
  const EigResult r =
      min_eigenpair([](const Vector& v) -> Vector { return 3.5 * v; }, 1,
                    EigSettings{});
  CHECK(r.converged);
  CHECK(r.lambda == doctest::Approx(3.5));
}

TEST_CASE("Rayleigh quotient of the returned vector never exceeds lambda + tol") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(500 + seed);
    const Matrix A = testsupport::random_symmetric(40, rng);
    EigSettings cfg;
    cfg.tol = 1e-6;
    cfg.seed = seed;
    const EigResult r = min_eigenpair(dense_op(A), 40, cfg);
    const double rayleigh = r.v.dot(A * r.v) / r.v.squaredNorm();
    CHECK(rayleigh <= r.lambda + cfg.tol);
    // the estimate approaches lambda_min from above
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    CHECK(r.lambda >= es.eigenvalues()(0) - 1e-9);
  }
}

TEST_CASE("soft failure carries the best pair found") {
  Rng rng(8);
  const Matrix A = testsupport::random_symmetric(200, rng);
  EigSettings cfg;
  cfg.tol = 1e-14;  // unreachable with this budget
  cfg.block_restart = 4;
  cfg.max_iters = 8;
  const EigResult r = min_eigenpair(dense_op(A), 200, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.v.size() == 200);
  CHECK(std::isfinite(r.lambda));
  CHECK(r.residual > 0.0);
}

TEST_CASE("identical output bits across runs with the same seed") {
  Rng rng(99);
  const Matrix A = testsupport::random_symmetric(30, rng);
  EigSettings cfg;
  cfg.seed = 1234;
  const EigResult a = min_eigenpair(dense_op(A), 30, cfg);
  const EigResult b = min_eigenpair(dense_op(A), 30, cfg);
  CHECK(a.lambda == b.lambda);
  CHECK((a.v - b.v).norm() == 0.0);
  CHECK(a.matvecs == b.matvecs);
}

TEST_CASE("settings validation") {
  EigSettings cfg;
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = EigSettings{};
  cfg.block_restart = 1;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = EigSettings{};
  cfg.max_iters = 10;
  cfg.block_restart = 20;
  CHECK_THROWS_AS(cfg.validate(), InputError);
}
