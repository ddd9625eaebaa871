#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace qns::nkesn {

enum class Nonlinearity { Linear, Tanh };

struct ReservoirConfig {
  std::size_t size = 50;
  std::size_t input_dim = 1;
  /// Fraction of nonzero recurrent weights.
  double connectivity = 0.1;
  double spectral_radius = 0.9;
  double input_scale = 1.0;
  Nonlinearity nonlinearity = Nonlinearity::Linear;
  std::uint64_t seed = 0;
};

struct Reservoir {
  Eigen::MatrixXd w_res;  // size x size
  Eigen::MatrixXd w_in;   // size x input_dim
  double spectral_radius = 0.9;
  double connectivity = 0.1;
  Nonlinearity nonlinearity = Nonlinearity::Linear;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(w_res.rows()); }
  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(w_in.cols()); }
};

struct SpectralEstimate {
  double radius = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// |lambda_max| by block power iteration: a block of min(n, 8) vectors is
/// pushed through W and re-orthonormalized, and the largest Ritz value
/// magnitude of the projected matrix is tracked until it moves less than
/// `tolerance` (relative). A block rather than one vector is needed because
/// real nonsymmetric matrices often have a complex dominant pair.
SpectralEstimate estimate_spectral_radius(const Eigen::MatrixXd& w, std::size_t max_iterations = 1000,
                                          double tolerance = 1e-10);

/// W scaled so its estimated spectral radius equals `rho_target`. Throws
/// std::invalid_argument for a non-square or zero-radius W or a
/// non-positive target, and MethodFailure when the estimate does not
/// converge.
Eigen::MatrixXd scale_to_spectral_radius(const Eigen::MatrixXd& w, double rho_target);

/// Sparse random recurrent matrix (entries uniform in [-1, 1] with
/// probability `connectivity`) scaled to the target radius, and dense input
/// weights uniform in [-input_scale, input_scale]. Throws
/// std::invalid_argument unless 0 < rho < 1 and 0 < connectivity <= 1.
Reservoir make_reservoir(const ReservoirConfig& config);

/// W_res z + W_in x, passed through tanh when configured.
Eigen::VectorXd reservoir_step(const Reservoir& r, const Eigen::VectorXd& z, const Eigen::VectorXd& x);

}  // namespace qns::nkesn
