#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace floqs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};

/// Base class for all solver failures surfaced to callers.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

class StepSizeUnderflow : public SolverError {
 public:
  explicit StepSizeUnderflow(const std::string& what) : SolverError(what) {}
};

class NonFiniteState : public SolverError {
 public:
  explicit NonFiniteState(const std::string& what) : SolverError(what) {}
};

class NearDefectiveMatrix : public SolverError {
 public:
  NearDefectiveMatrix(const std::string& what, double cond)
      : SolverError(what), condition(cond) {}
  double condition;
};

class NonDecayingMode : public SolverError {
 public:
  explicit NonDecayingMode(const std::string& what) : SolverError(what) {}
};

class InvalidInput : public SolverError {
 public:
  explicit InvalidInput(const std::string& what) : SolverError(what) {}
};

}  // namespace floqs
