#include "nvard/rng.hpp"

#include <stdexcept>

namespace nvard {

Eigen::VectorXd sample_gaussian_precision(const Eigen::MatrixXd& precision,
                                          const Eigen::VectorXd& shift,
                                          RngStream& rng) {
  const long d = precision.rows();
  if (precision.cols() != d || shift.size() != d)
    throw std::invalid_argument("sample_gaussian_precision: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("sample_gaussian_precision: precision matrix not positive definite");
  Eigen::VectorXd mean = llt.solve(shift);
  Eigen::VectorXd z = rng.standard_normal(static_cast<int>(d));
  // x = mean + U^-1 z with A = U'U gives cov(x) = A^-1.
  return mean + llt.matrixU().solve(z);
}

}  // namespace nvard
