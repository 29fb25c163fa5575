#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "lrsdp/types.hpp"

namespace lrsdp {

enum class FieldKind { kReal, kComplexEmbedded };

// Operator-form SDP
//
//   min  C . X   s.t.  A(X) = b,  Tr(X) <= tau,  X psd,
//
// described entirely through callables acting on tall factor matrices U
// (X = U U^T is never formed). C is never materialized either; its entrywise
// 1-norm is supplied analytically by the builder. Instances are immutable
// after construction and safe to share across threads; the callables must be
// pure and may parallelize internally.
struct SdpInstance {
  Index n = 0;  // matrix side dimension
  Index m = 0;  // number of constraints
  Vector b;     // right-hand side, length m
  double tau = 1.0;
  double norm_b1 = 0.0;  // ||b||_1
  double norm_C1 = 0.0;  // entrywise ||C||_1
  FieldKind field_kind = FieldKind::kReal;

  // Index k with A_k = I (a trace constraint), if the instance has one.
  // Lets the solver fold the spectraplex multiplier theta into p when
  // assembling the final dual certificate.
  std::optional<Index> identity_constraint;

  std::function<Matrix(const Matrix&)> apply_C;                        // U -> CU
  std::function<Matrix(const Vector&, const Matrix&)> apply_adjoint;   // (p,U) -> (A*p)U
  std::function<Vector(const Matrix&)> apply_map;                      // U -> A(UU^T)

  // Optional fused kernel computing CU + (A*q)U in one pass over the data.
  std::function<Matrix(const Vector&, const Matrix&)> apply_C_plus_adjoint;

  Matrix C_plus_adjoint(const Vector& q, const Matrix& U) const {
    if (apply_C_plus_adjoint) return apply_C_plus_adjoint(q, U);
    return apply_C(U) + apply_adjoint(q, U);
  }

  void validate() const;
  void check_factor_dims(const Matrix& U, const char* where) const;
};

// Low-rank primal iterate U with ||U||_F <= 1 (after trace-bound scaling).
struct Factor {
  Matrix U;

  Factor() = default;
  explicit Factor(Matrix data) : U(std::move(data)) {}

  Index rank() const { return U.cols(); }
  double norm() const { return U.norm(); }

  // Ball membership is an invariant wherever a factor crosses a module
  // boundary; slack covers accumulated rounding.
  bool in_unit_ball(double slack = 1e-12) const { return norm() <= 1.0 + slack; }
};

// Lagrange multiplier p and spectraplex multiplier theta >= 0; the dual
// slack C + A*p + theta I certifies dual feasibility.
struct DualState {
  Vector p;
  double theta = 0.0;
};

// Augmented Lagrangian value L_beta(UU^T; p)
//   = C.UU^T + p^T (A(UU^T) - b) + (beta/2) ||A(UU^T) - b||^2.
double al_value(const SdpInstance& inst, const Matrix& U, const Vector& p,
                double beta);

// Gradient of U -> L_beta(UU^T; p):
//   2 [C + A*(p + beta (A(UU^T) - b))] U,
// computed in exactly two kernel passes (one apply_map, one fused C/adjoint).
Matrix al_gradient(const SdpInstance& inst, const Matrix& U, const Vector& p,
                   double beta);

// Matrix-free handle for the X-space gradient G = C + A*(q) with
// q = p + beta (A(UU^T) - b). q is computed once at construction; the handle
// is immutable afterwards.
class GradientOperator {
 public:
  GradientOperator(const SdpInstance& inst, const Matrix& U, const Vector& p,
                   double beta);

  Matrix apply(const Matrix& V) const;
  Vector apply_vec(const Vector& v) const;

  const Vector& q() const { return q_; }
  const Vector& residual() const { return residual_; }  // A(UU^T) - b
  Index dim() const { return inst_->n; }

 private:
  const SdpInstance* inst_;
  Vector q_;
  Vector residual_;
};

// Euclidean projection onto the unit Frobenius ball.
Factor project_ball(const Matrix& U);

// g(U) = L_beta(UU^T; p) packaged for the nonconvex subsolvers, with a fused
// value+gradient evaluation that shares the kernel passes.
class AlFunction {
 public:
  AlFunction(const SdpInstance& inst, Vector p, double beta);

  double value(const Matrix& U) const;
  Matrix gradient(const Matrix& U) const;
  std::pair<double, Matrix> value_and_gradient(const Matrix& U) const;

  const SdpInstance& instance() const { return *inst_; }
  const Vector& multiplier() const { return p_; }
  double beta() const { return beta_; }

 private:
  const SdpInstance* inst_;
  Vector p_;
  double beta_;
};

}  // namespace lrsdp
