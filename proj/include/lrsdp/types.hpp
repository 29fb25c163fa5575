#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace lrsdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Bad arguments: dimension mismatches, invalid parameter ranges, malformed files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// NaN/Inf encountered in an intermediate quantity.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lrsdp
