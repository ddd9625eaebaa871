#include "qns/nkesn/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "qns/common.hpp"

namespace qns::nkesn {

namespace {

constexpr std::size_t kBlockWidth = 8;
constexpr std::uint64_t kStartSeed = 0x5eed;

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

}  // namespace

SpectralEstimate estimate_spectral_radius(const Eigen::MatrixXd& w, std::size_t max_iterations, double tolerance) {
  if (w.rows() != w.cols() || w.rows() == 0) throw std::invalid_argument("spectral radius needs a square matrix");
  const Eigen::Index n = w.rows();
  const Eigen::Index b = std::min<Eigen::Index>(n, kBlockWidth);
  Rng rng(kStartSeed);
  Eigen::MatrixXd q(n, b);
  for (Eigen::Index c = 0; c < b; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) q(r, c) = 2.0 * uniform01(rng) - 1.0;
  }
  q = orthonormal_columns(q);

  // radii below this are indistinguishable from zero at double precision
  const double floor = 1e-13 * w.norm();
  SpectralEstimate est;
  double previous = -1.0;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    const Eigen::MatrixXd y = w * q;
    const Eigen::MatrixXd h = q.transpose() * y;
    const double radius = Eigen::EigenSolver<Eigen::MatrixXd>(h, false).eigenvalues().cwiseAbs().maxCoeff();
    est.radius = radius;
    est.iterations = it;
    const bool settled = std::abs(radius - previous) <= tolerance * radius || (radius <= floor && previous <= floor);
    if (previous >= 0.0 && settled) {
      est.converged = true;
      return est;
    }
    previous = radius;
    if (y.norm() == 0.0) {
      // W annihilates the subspace; its radius on it is exactly zero
      est.converged = true;
      return est;
    }
    q = orthonormal_columns(y);
  }
  return est;
}

Eigen::MatrixXd scale_to_spectral_radius(const Eigen::MatrixXd& w, double rho_target) {
  if (!(rho_target > 0.0)) throw std::invalid_argument("target spectral radius must be positive");
  const auto est = estimate_spectral_radius(w);
  if (!est.converged) {
    throw MethodFailure("spectral radius power iteration did not converge in " + std::to_string(est.iterations) +
                        " iterations (last estimate " + std::to_string(est.radius) + ")");
  }
  if (!(est.radius > 1e-13 * w.norm())) throw std::invalid_argument("cannot rescale a matrix with zero spectral radius");
  return w * (rho_target / est.radius);
}

Reservoir make_reservoir(const ReservoirConfig& config) {
  if (!(config.spectral_radius > 0.0 && config.spectral_radius < 1.0)) {
    throw std::invalid_argument("reservoir spectral radius must lie in (0, 1)");
  }
  if (!(config.connectivity > 0.0 && config.connectivity <= 1.0)) {
    throw std::invalid_argument("reservoir connectivity must lie in (0, 1]");
  }
  if (config.size == 0 || config.input_dim == 0) throw std::invalid_argument("reservoir dimensions must be positive");
  Rng rng(config.seed);
  const auto n = static_cast<Eigen::Index>(config.size);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const double keep = uniform01(rng);
      const double value = 2.0 * uniform01(rng) - 1.0;
      if (keep < config.connectivity) w(r, c) = value;
    }
  }
  Eigen::MatrixXd w_in(n, static_cast<Eigen::Index>(config.input_dim));
  for (Eigen::Index r = 0; r < w_in.rows(); ++r) {
    for (Eigen::Index c = 0; c < w_in.cols(); ++c) w_in(r, c) = config.input_scale * (2.0 * uniform01(rng) - 1.0);
  }
  Reservoir res;
  res.w_res = scale_to_spectral_radius(w, config.spectral_radius);
  res.w_in = std::move(w_in);
  res.spectral_radius = config.spectral_radius;
  res.connectivity = config.connectivity;
  res.nonlinearity = config.nonlinearity;
  res.seed = config.seed;
  return res;
}

Eigen::VectorXd reservoir_step(const Reservoir& r, const Eigen::VectorXd& z, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(z.size()) != r.size() || static_cast<std::size_t>(x.size()) != r.input_dim()) {
    throw std::invalid_argument("reservoir state or input dimension mismatch");
  }
  Eigen::VectorXd next = r.w_res * z + r.w_in * x;
  if (r.nonlinearity == Nonlinearity::Tanh) next = next.array().tanh().matrix();
  return next;
}

}  // namespace qns::nkesn
