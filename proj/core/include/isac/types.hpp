// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace isac {

using cx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Scenario or config file is malformed or violates an invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A precondition on numerical inputs (PSD-ness, positivity) does not hold.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The waveform produces no response toward the target; the MVDR
/// normalization is undefined.
class DegenerateTargetError : public Error {
 public:
  using Error::Error;
};

/// A solver produced non-finite values.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& where, int iteration)
      : Error(where + ": non-finite value at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace isac
