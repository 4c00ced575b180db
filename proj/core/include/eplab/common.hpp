#pragma once

#include <Eigen/Dense>

#include <numbers>
#include <stdexcept>

namespace eplab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised for malformed inputs and violated operation preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 2πe, the normalizer in the entropy power.
inline constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

}  // namespace eplab
