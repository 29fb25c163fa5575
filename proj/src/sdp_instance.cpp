#include "lrsdp/sdp_instance.hpp"

#include <cmath>

namespace lrsdp {

void SdpInstance::validate() const {
  require(n >= 1, "instance: n must be >= 1");
  require(m >= 1, "instance: m must be >= 1");
  require(b.size() == m, "instance: b has wrong length");
  require(std::isfinite(tau) && tau > 0, "instance: tau must be positive");
  require(std::isfinite(norm_b1) && norm_b1 > 0,
          "instance: norm_b1 must be positive");
  require(std::isfinite(norm_C1) && norm_C1 > 0,
          "instance: norm_C1 must be positive");
  require(static_cast<bool>(apply_C), "instance: apply_C missing");
  require(static_cast<bool>(apply_adjoint), "instance: apply_adjoint missing");
  require(static_cast<bool>(apply_map), "instance: apply_map missing");
  if (identity_constraint)
    require(*identity_constraint >= 0 && *identity_constraint < m,
            "instance: identity_constraint out of range");
}

void SdpInstance::check_factor_dims(const Matrix& U, const char* where) const {
  if (U.rows() != n)
    throw InputError(std::string(where) + ": factor has " +
                     std::to_string(U.rows()) + " rows, instance needs " +
                     std::to_string(n));
  if (U.cols() < 1)
    throw InputError(std::string(where) + ": factor must have >= 1 column");
}

namespace {

void check_multiplier(const SdpInstance& inst, const Vector& p,
                      const char* where) {
  if (p.size() != inst.m)
    throw InputError(std::string(where) + ": multiplier has length " +
                     std::to_string(p.size()) + ", instance needs " +
                     std::to_string(inst.m));
}

void check_finite(double v, const char* where) {
  if (!std::isfinite(v))
    throw NumericalError(std::string(where) + ": non-finite result");
}

}  // namespace

double al_value(const SdpInstance& inst, const Matrix& U, const Vector& p,
                double beta) {
  inst.check_factor_dims(U, "al_value");
  check_multiplier(inst, p, "al_value");
  require(beta > 0, "al_value: beta must be positive");
  const Vector r = inst.apply_map(U) - inst.b;
  const double cdot = inst.apply_C(U).cwiseProduct(U).sum();
  const double val = cdot + p.dot(r) + 0.5 * beta * r.squaredNorm();
  check_finite(val, "al_value");
  return val;
}

Matrix al_gradient(const SdpInstance& inst, const Matrix& U, const Vector& p,
                   double beta) {
  inst.check_factor_dims(U, "al_gradient");
  check_multiplier(inst, p, "al_gradient");
  require(beta > 0, "al_gradient: beta must be positive");
  const Vector q = p + beta * (inst.apply_map(U) - inst.b);
  Matrix grad = 2.0 * inst.C_plus_adjoint(q, U);
  if (!grad.allFinite()) throw NumericalError("al_gradient: non-finite result");
  return grad;
}

GradientOperator::GradientOperator(const SdpInstance& inst, const Matrix& U,
                                   const Vector& p, double beta)
    : inst_(&inst) {
  inst.check_factor_dims(U, "gradient_operator");
  check_multiplier(inst, p, "gradient_operator");
  require(beta > 0, "gradient_operator: beta must be positive");
  residual_ = inst.apply_map(U) - inst.b;
  q_ = p + beta * residual_;
  if (!q_.allFinite())
    throw NumericalError("gradient_operator: non-finite multiplier");
}

Matrix GradientOperator::apply(const Matrix& V) const {
  inst_->check_factor_dims(V, "gradient_operator::apply");
  return inst_->C_plus_adjoint(q_, V);
}

Vector GradientOperator::apply_vec(const Vector& v) const {
  return apply(Matrix(v)).col(0);
}

Factor project_ball(const Matrix& U) {
  if (!U.allFinite()) throw InputError("project_ball: non-finite input");
  const double nrm = U.norm();
  if (nrm <= 1.0) return Factor(U);
  return Factor(U / nrm);
}

AlFunction::AlFunction(const SdpInstance& inst, Vector p, double beta)
    : inst_(&inst), p_(std::move(p)), beta_(beta) {
  check_multiplier(inst, p_, "AlFunction");
  require(beta_ > 0, "AlFunction: beta must be positive");
}

double AlFunction::value(const Matrix& U) const {
  return al_value(*inst_, U, p_, beta_);
}

Matrix AlFunction::gradient(const Matrix& U) const {
  return al_gradient(*inst_, U, p_, beta_);
}

std::pair<double, Matrix> AlFunction::value_and_gradient(const Matrix& U) const {
  inst_->check_factor_dims(U, "AlFunction::value_and_gradient");
  const Vector r = inst_->apply_map(U) - inst_->b;
  const Vector q = p_ + beta_ * r;
  Matrix half_grad = inst_->C_plus_adjoint(q, U);
  // <CU + (A*q)U, U> = C.UU^T + q^T A(UU^T), so C.UU^T falls out of the fused
  // pass via the adjoint identity; no separate apply_C evaluation is needed.
  const double cdot = half_grad.cwiseProduct(U).sum() - q.dot(r + inst_->b);
  const double val = cdot + p_.dot(r) + 0.5 * beta_ * r.squaredNorm();
  check_finite(val, "AlFunction::value_and_gradient");
  half_grad *= 2.0;
  return {val, std::move(half_grad)};
}

}  // namespace lrsdp
