#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace nvard {

// Seedable random stream.  Distinct (seed, stream) pairs give independent
// streams, one per chain; identical pairs replay identical draws.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{seed, stream, std::uint64_t{0x9e3779b97f4a7c15}};
    gen_.seed(seq);
  }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
  }

  double normal(double mean = 0.0, double sd = 1.0) {
    return std::normal_distribution<double>(mean, sd)(gen_);
  }

  Eigen::VectorXd standard_normal(int dim) {
    Eigen::VectorXd z(dim);
    for (int i = 0; i < dim; ++i) z[i] = normal();
    return z;
  }

  double gamma(double shape, double scale) {
    return std::gamma_distribution<double>(shape, scale)(gen_);
  }

  // Inverse gamma with shape a and rate b: 1/X ~ Gamma(a, scale 1/b).
  double inverse_gamma(double shape, double rate) {
    double g = gamma(shape, 1.0 / rate);
    if (g <= 0.0) g = std::numeric_limits<double>::min();
    return 1.0 / g;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Draw from N(A^-1 b, A^-1) given the precision matrix A (symmetric
// positive definite) and shift b, via the Cholesky factor of A.
Eigen::VectorXd sample_gaussian_precision(const Eigen::MatrixXd& precision,
                                          const Eigen::VectorXd& shift,
                                          RngStream& rng);

}  // namespace nvard
