#include "qns/qsim/mixer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace qns::qsim {
namespace {

// True when every neighbour of v holds `bit` in basis state x.
bool neighbours_agree(const Graph& graph, std::size_t v, std::uint64_t x, int bit) {
  for (std::size_t w : graph[v]) {
    if (static_cast<int>((x >> w) & 1U) != bit) return false;
  }
  return true;
}

}  // namespace

Graph ring_graph(std::size_t n) {
  Graph g(n);
  if (n < 2) return g;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t next = (v + 1) % n;
    const std::size_t prev = (v + n - 1) % n;
    g[v].push_back(prev);
    if (next != prev) g[v].push_back(next);
  }
  return g;
}

MixerSpec MixerSpec::bit_flip(Graph graph, int target_bit) {
  if (target_bit != 0 && target_bit != 1) throw std::invalid_argument("target bit must be 0 or 1");
  MixerSpec m;
  m.kind = MixerKind::BitFlipGraph;
  m.graph = std::move(graph);
  m.target_bit = target_bit;
  return m;
}

void MixerSpec::validate(std::size_t n_qubits) const {
  if (kind == MixerKind::TransverseField) return;
  if (target_bit != 0 && target_bit != 1) throw std::invalid_argument("bit-flip target bit must be 0 or 1");
  if (graph.size() != n_qubits) {
    throw std::invalid_argument("bit-flip graph has " + std::to_string(graph.size()) + " vertices, expected " +
                                std::to_string(n_qubits));
  }
  for (std::size_t v = 0; v < graph.size(); ++v) {
    for (std::size_t w : graph[v]) {
      if (w == v) throw std::invalid_argument("bit-flip graph has a self-loop at vertex " + std::to_string(v));
      if (w >= n_qubits) throw std::invalid_argument("bit-flip graph references vertex out of range");
    }
  }
}

Eigen::MatrixXd mixer_matrix(const MixerSpec& mixer, std::size_t n_qubits) {
  if (n_qubits > kDenseMixerLimit) throw std::invalid_argument("dense mixer limited to 12 qubits");
  mixer.validate(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::size_t v = 0; v < n_qubits; ++v) {
      const std::uint64_t y = x ^ (std::uint64_t{1} << v);
      if (mixer.kind == MixerKind::TransverseField) {
        h(y, x) -= 1.0;
      } else if (neighbours_agree(mixer.graph, v, x, mixer.target_bit)) {
        // 2^{-d(v)} * 2^{d(v)}: each satisfied (I + (-1)^b Z_w) contributes 2.
        h(y, x) += 1.0;
      }
    }
  }
  return h;
}

std::vector<Complex> apply_mixer_operator(const MixerSpec& mixer, std::span<const Complex> amplitudes,
                                          std::size_t n_qubits) {
  mixer.validate(n_qubits);
  if (amplitudes.size() != (std::size_t{1} << n_qubits)) throw std::invalid_argument("dimension mismatch");
  std::vector<Complex> out(amplitudes.size(), Complex{0.0, 0.0});
  for (std::uint64_t x = 0; x < amplitudes.size(); ++x) {
    if (amplitudes[x] == Complex{0.0, 0.0}) continue;
    for (std::size_t v = 0; v < n_qubits; ++v) {
      const std::uint64_t y = x ^ (std::uint64_t{1} << v);
      if (mixer.kind == MixerKind::TransverseField) {
        out[y] -= amplitudes[x];
      } else if (neighbours_agree(mixer.graph, v, x, mixer.target_bit)) {
        out[y] += amplitudes[x];
      }
    }
  }
  return out;
}

MixerPropagator::MixerPropagator(MixerSpec mixer, std::size_t n_qubits)
    : mixer_(std::move(mixer)), n_qubits_(n_qubits) {
  mixer_.validate(n_qubits_);
  if (mixer_.kind == MixerKind::BitFlipGraph) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mixer_matrix(mixer_, n_qubits_));
    if (solver.info() != Eigen::Success) throw std::runtime_error("bit-flip mixer diagonalization failed");
    eigenvectors_ = solver.eigenvectors();
    eigenvalues_ = solver.eigenvalues();
  }
}

void MixerPropagator::apply(StateVector& state, double beta) const {
  if (state.qubits() != n_qubits_) throw std::invalid_argument("mixer/state qubit count mismatch");
  if (beta == 0.0) return;
  if (mixer_.kind == MixerKind::TransverseField) {
    // exp(-i beta (-X)) = exp(i beta X) = Rx(-2 beta) on every qubit.
    for (std::size_t q = 0; q < n_qubits_; ++q) apply_rx(state, q, -2.0 * beta);
    return;
  }
  const auto dim = static_cast<Eigen::Index>(state.dimension());
  Eigen::Map<Eigen::VectorXcd> psi(state.amplitudes().data(), dim);
  Eigen::VectorXd re = eigenvectors_.transpose() * psi.real();
  Eigen::VectorXd im = eigenvectors_.transpose() * psi.imag();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double angle = -beta * eigenvalues_(k);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double r = re(k);
    re(k) = c * r - s * im(k);
    im(k) = s * r + c * im(k);
  }
  psi.real() = eigenvectors_ * re;
  psi.imag() = eigenvectors_ * im;
}

}  // namespace qns::qsim
