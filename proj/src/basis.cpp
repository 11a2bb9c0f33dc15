#include "floqs/basis.hpp"

namespace floqs {

std::shared_ptr<const BasisDescriptor> BasisDescriptor::plain(int full_dim,
                                                              std::string name) {
  if (full_dim < 2) throw InvalidInput("BasisDescriptor: full_dim >= 2 required");
  auto b = std::make_shared<BasisDescriptor>();
  b->full_dim_ = full_dim;
  b->name_ = std::move(name);
  return b;
}

std::shared_ptr<const BasisDescriptor> BasisDescriptor::transformed(
    int full_dim, ComplexMatrix from_plain, std::string name) {
  const int d = full_dim * full_dim - 1;
  if (from_plain.rows() != d || from_plain.cols() != d)
    throw InvalidInput("BasisDescriptor: transform size mismatch");
  auto b = std::make_shared<BasisDescriptor>();
  b->full_dim_ = full_dim;
  b->name_ = std::move(name);
  b->to_plain_ = from_plain.partialPivLu().solve(ComplexMatrix::Identity(d, d));
  b->from_plain_ = std::move(from_plain);
  return b;
}

std::pair<int, int> BasisDescriptor::element(int k) const {
  // plain component k corresponds to full column-stacked index k+1
  const int idx = k + 1;
  return {idx % full_dim_, idx / full_dim_};
}

ComplexMatrix BasisDescriptor::devectorize(const ComplexVector& stored) const {
  if (stored.size() != reduced_dim())
    throw InvalidInput("devectorize: dimension mismatch");
  ComplexVector plain = is_plain() ? stored : ComplexVector(to_plain_ * stored);
  ComplexMatrix rho(full_dim_, full_dim_);
  Complex diag_sum = 0.0;
  for (int k = 0; k < reduced_dim(); ++k) {
    const auto [r, c] = element(k);
    rho(r, c) = plain(k);
    if (r == c) diag_sum += plain(k);
  }
  rho(0, 0) = 1.0 - diag_sum;
  return rho;
}

ComplexVector BasisDescriptor::vectorize(const ComplexMatrix& rho) const {
  if (rho.rows() != full_dim_ || rho.cols() != full_dim_)
    throw InvalidInput("vectorize: dimension mismatch");
  ComplexVector plain(reduced_dim());
  for (int k = 0; k < reduced_dim(); ++k) {
    const auto [r, c] = element(k);
    plain(k) = rho(r, c);
  }
  if (is_plain()) return plain;
  return from_plain_ * plain;
}

Eigen::VectorXi BasisDescriptor::plain_trace_markers() const {
  Eigen::VectorXi e = Eigen::VectorXi::Zero(reduced_dim());
  for (int k = 0; k < reduced_dim(); ++k) {
    const auto [r, c] = element(k);
    if (r == c) e(k) = 1;
  }
  return e;
}

}  // namespace floqs
