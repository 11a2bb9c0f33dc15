#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "floqs/types.hpp"

namespace floqs {

/// Maps a reduced state vector back to the full density matrix. The "plain"
/// layout stacks the matrix elements column by column with the (0,0) element
/// removed; model bases are linear transforms of it (stored = from_plain *
/// plain). The (0,0) population is reconstructed from the unit-trace
/// constraint, so devectorized matrices always have trace one exactly.
class BasisDescriptor {
 public:
  /// Plain column-stacked basis for an N-level system.
  static std::shared_ptr<const BasisDescriptor> plain(int full_dim,
                                                      std::string name = "plain");
  /// Transformed basis: stored = from_plain * plain.
  static std::shared_ptr<const BasisDescriptor> transformed(
      int full_dim, ComplexMatrix from_plain, std::string name);

  int full_dim() const { return full_dim_; }
  int reduced_dim() const { return full_dim_ * full_dim_ - 1; }
  const std::string& name() const { return name_; }
  bool is_plain() const { return !to_plain_.size(); }
  const ComplexMatrix& to_plain() const { return to_plain_; }
  const ComplexMatrix& from_plain() const { return from_plain_; }

  /// (row, col) of the matrix element carried by plain component k.
  std::pair<int, int> element(int k) const;

  ComplexMatrix devectorize(const ComplexVector& stored) const;
  ComplexVector vectorize(const ComplexMatrix& rho) const;

  /// 0/1 markers of the diagonal components in the plain layout.
  Eigen::VectorXi plain_trace_markers() const;

 private:
  int full_dim_ = 0;
  std::string name_;
  ComplexMatrix to_plain_;    // empty when plain
  ComplexMatrix from_plain_;  // empty when plain
};

using BasisPtr = std::shared_ptr<const BasisDescriptor>;

}  // namespace floqs
