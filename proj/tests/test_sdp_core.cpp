#include "doctest.h"

#include <cmath>

#include "lrsdp/sdp_instance.hpp"
#include "support/oracles.hpp"

using namespace lrsdp;
using testsupport::DenseInstance;
using testsupport::make_random_dense_instance;

namespace {

// min 2x s.t. x_{11} = 1 on the 1x1 cone
DenseInstance one_dim_instance() {
  DenseInstance d;
  d.C = Matrix::Constant(1, 1, 2.0);
  d.A = {Matrix::Constant(1, 1, 1.0)};
  d.b = Vector::Constant(1, 1.0);
  return d;
}

}  // namespace

TEST_CASE("al_value matches hand evaluation on the 1-D instance") {
  const DenseInstance d = one_dim_instance();
  const SdpInstance inst = d.as_operator();
  Matrix U = Matrix::Constant(1, 1, 0.5);
  const double val = al_value(inst, U, Vector::Zero(1), 2.0);
  CHECK(val == doctest::Approx(1.0625).epsilon(1e-14));
}

TEST_CASE("al_value at U = 0 reduces to the penalty on b") {
  const DenseInstance d = make_random_dense_instance(5, 3, 7);
  const SdpInstance inst = d.as_operator();
  const Matrix U = Matrix::Zero(5, 2);
  for (double beta : {0.5, 3.0, 100.0}) {
    const double val = al_value(inst, U, Vector::Zero(3), beta);
    CHECK(val == doctest::Approx(0.5 * beta * d.b.squaredNorm()).epsilon(1e-13));
  }
}

TEST_CASE("al_value agrees with the dense oracle on random instances") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const DenseInstance d = make_random_dense_instance(6, 4, seed);
    const SdpInstance inst = d.as_operator();
    Rng rng(seed + 100);
    const Matrix U = gaussian_matrix(6, 2, rng);
    const Vector p = gaussian_vector(4, rng);
    const double got = al_value(inst, U, p, 2.5);
    const double want = d.al_value(U, p, 2.5);
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("al_value input and overflow errors") {
  const DenseInstance d = one_dim_instance();
  const SdpInstance inst = d.as_operator();
  CHECK_THROWS_AS(al_value(inst, Matrix::Zero(2, 1), Vector::Zero(1), 1.0),
                  InputError);
  CHECK_THROWS_AS(al_value(inst, Matrix::Zero(1, 1), Vector::Zero(2), 1.0),
                  InputError);
  CHECK_THROWS_AS(
      al_value(inst, Matrix::Constant(1, 1, 1e200), Vector::Zero(1), 1.0),
      NumericalError);
}

TEST_CASE("al_gradient matches hand evaluation on the 1-D instance") {
  const SdpInstance inst = one_dim_instance().as_operator();
  const Matrix U = Matrix::Constant(1, 1, 0.5);
  const Matrix g = al_gradient(inst, U, Vector::Zero(1), 2.0);
  CHECK(g(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("al_gradient vanishes at U = 0") {
  const SdpInstance inst = make_random_dense_instance(6, 4, 11).as_operator();
  const Matrix g = al_gradient(inst, Matrix::Zero(6, 3), Vector::Zero(4), 2.0);
  CHECK(g.norm() == 0.0);
}

TEST_CASE("al_gradient matches central finite differences") {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DenseInstance d = make_random_dense_instance(8, 5, 1000 + seed);
    const SdpInstance inst = d.as_operator();
    Rng rng(seed);
    const Matrix U = gaussian_matrix(8, 3, rng) * 0.3;
    const Vector p = gaussian_vector(5, rng);
    const double beta = 1.7;
    const Matrix g = al_gradient(inst, U, p, beta);
    const Matrix fd = testsupport::finite_difference_gradient(
        [&](const Matrix& V) { return al_value(inst, V, p, beta); }, U, 1e-6);
    const double rel = (g - fd).norm() / std::max(1.0, g.norm());
    if (rel > 1e-5) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("al_gradient uses exactly two kernel passes") {
  int map_calls = 0, c_calls = 0, adjoint_calls = 0, fused_calls = 0;
  const DenseInstance d = make_random_dense_instance(6, 4, 3);
  const SdpInstance inst =
      d.as_operator(&map_calls, &c_calls, &adjoint_calls, &fused_calls);
  Rng rng(9);
  const Matrix U = gaussian_matrix(6, 2, rng);
  al_gradient(inst, U, Vector::Zero(4), 2.0);
  CHECK(map_calls == 1);
  CHECK(fused_calls == 1);
  CHECK(c_calls == 0);
  CHECK(adjoint_calls == 0);
}

TEST_CASE("gradient_operator handle") {
  SUBCASE("hand value on the 1-D instance") {
    const SdpInstance inst = one_dim_instance().as_operator();
    const GradientOperator G(inst, Matrix::Constant(1, 1, 0.5), Vector::Zero(1),
                             2.0);
    CHECK(G.apply_vec(Vector::Ones(1))(0) == doctest::Approx(0.5));
  }
  SUBCASE("zero q reduces to apply_C") {
    // feasible U and p = 0 make q vanish
    DenseInstance d = one_dim_instance();
    d.b(0) = 0.25;
    const SdpInstance inst = d.as_operator();
    const GradientOperator G(inst, Matrix::Constant(1, 1, 0.5), Vector::Zero(1),
                             5.0);
    CHECK(G.q().norm() == doctest::Approx(0.0).epsilon(1e-15));
    Vector v = Vector::Ones(1);
    CHECK(G.apply_vec(v)(0) == doctest::Approx(2.0));
  }
  SUBCASE("agrees with the dense operator") {
    const DenseInstance d = make_random_dense_instance(7, 4, 21);
    const SdpInstance inst = d.as_operator();
    Rng rng(4);
    const Matrix U = gaussian_matrix(7, 2, rng) * 0.4;
    const Vector p = gaussian_vector(4, rng);
    const double beta = 3.0;
    const GradientOperator G(inst, U, p, beta);
    const Vector q = p + beta * (d.map(U * U.transpose()) - d.b);
    const Matrix G_dense = d.C + d.adjoint(q);
    for (int trial = 0; trial < 5; ++trial) {
      const Vector v = gaussian_vector(7, rng);
      CHECK((G.apply_vec(v) - G_dense * v).norm() <=
            1e-10 * std::max(1.0, v.norm()));
    }
  }
}

TEST_CASE("project_ball") {
  Matrix A(2, 2);
  A << 3, 0, 0, 4;
  const Factor p = project_ball(A);
  CHECK(p.U(0, 0) == doctest::Approx(0.6));
  CHECK(p.U(1, 1) == doctest::Approx(0.8));

  Matrix inside(2, 1);
  inside << 0.3, 0.4;
  CHECK((project_ball(inside).U - inside).norm() == 0.0);

  CHECK(project_ball(Matrix::Zero(3, 2)).U.norm() == 0.0);

  Matrix bad(1, 1);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(project_ball(bad), InputError);

  SUBCASE("idempotent and nonexpansive on sampled pairs") {
    Rng rng(42);
    for (int t = 0; t < 200; ++t) {
      const Matrix X = gaussian_matrix(4, 2, rng);
      const Matrix Y = gaussian_matrix(4, 2, rng);
      const Matrix PX = project_ball(X).U;
      const Matrix PY = project_ball(Y).U;
      CHECK((project_ball(PX).U - PX).norm() <= 1e-14 * (1.0 + PX.norm()));
      CHECK((PX - PY).norm() <= (X - Y).norm() + 1e-12);
    }
  }
}

TEST_CASE("adjoint consistency fuzz on dense instances") {
  const DenseInstance d = make_random_dense_instance(6, 5, 77);
  const SdpInstance inst = d.as_operator();
  Rng rng(78);
  for (int t = 0; t < 1000; ++t) {
    const Matrix U = gaussian_matrix(6, 1 + t % 3, rng);
    const Vector p = gaussian_vector(5, rng);
    const double lhs = inst.apply_map(U).dot(p);
    const double rhs = inst.apply_adjoint(p, U).cwiseProduct(U).sum();
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("al_value is invariant under right rotations of the factor") {
  const DenseInstance d = make_random_dense_instance(6, 4, 5);
  const SdpInstance inst = d.as_operator();
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const Matrix U = gaussian_matrix(6, 3, rng) * 0.5;
    const Matrix Q = testsupport::random_orthogonal(3, rng);
    const Vector p = gaussian_vector(4, rng);
    const double a = al_value(inst, U, p, 2.0);
    const double b = al_value(inst, U * Q, p, 2.0);
    CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("apply_map depends only on UU^T") {
  const DenseInstance d = make_random_dense_instance(5, 4, 15);
  const SdpInstance inst = d.as_operator();
  Rng rng(16);
  const Matrix U = gaussian_matrix(5, 3, rng);
  const Matrix Q = testsupport::random_orthogonal(3, rng);
  CHECK((inst.apply_map(U) - inst.apply_map(U * Q)).norm() <= 1e-10);
}

TEST_CASE("AlFunction fused evaluation matches separate paths") {
  const DenseInstance d = make_random_dense_instance(7, 5, 31);
  const SdpInstance inst = d.as_operator();
  const AlFunction f(inst, Vector::Ones(5) * 0.3, 4.0);
  Rng rng(32);
  const Matrix U = gaussian_matrix(7, 2, rng) * 0.4;
  const auto [val, grad] = f.value_and_gradient(U);
  CHECK(val == doctest::Approx(f.value(U)).epsilon(1e-12));
  CHECK((grad - f.gradient(U)).norm() <= 1e-10 * (1.0 + grad.norm()));
}
