#include "qns/qsim/state_vector.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qns/simd/kernels.hpp"

namespace qns {

std::size_t max_qubits() {
  if (const char* env = std::getenv("QNS_MAX_QUBITS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && value >= 1 && value <= 30) return value;
  }
  return kDefaultMaxQubits;
}

}  // namespace qns

namespace qns::qsim {
namespace {

void check_qubit_index(const StateVector& state, std::size_t qubit) {
  if (qubit >= state.qubits()) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for " +
                            std::to_string(state.qubits()) + " qubits");
  }
}

void apply_matrix(StateVector& state, std::size_t qubit, Complex m00, Complex m01, Complex m10, Complex m11) {
  check_qubit_index(state, qubit);
  const simd::Gate2x2 gate{{m00.real(), m00.imag(), m01.real(), m01.imag(), m10.real(), m10.imag(),
                            m11.real(), m11.imag()}};
  simd::active_kernels().apply_gate(state.raw(), state.dimension(), qubit, gate);
}

}  // namespace

void check_qubit_count(std::size_t n_qubits) {
  if (n_qubits < 1 || n_qubits > max_qubits()) {
    throw std::invalid_argument("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                                std::to_string(max_qubits()) + "]");
  }
}

StateVector::StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis(std::size_t n_qubits, std::uint64_t index) {
  check_qubit_count(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw std::out_of_range("basis index out of range");
  std::vector<Complex> amps(dim, Complex{0.0, 0.0});
  amps[index] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("amplitude count must be a power of two >= 2");
  }
  const auto n = static_cast<std::size_t>(std::countr_zero(dim));
  check_qubit_count(n);
  double norm = 0.0;
  for (const Complex& a : amplitudes) norm += std::norm(a);
  if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("amplitudes are not normalized");
  return StateVector(n, std::move(amplitudes));
}

double StateVector::norm_squared() const { return simd::active_kernels().norm_squared(raw(), dimension()); }

double StateVector::probability(std::uint64_t index) const { return std::norm(amplitudes_.at(index)); }

std::vector<double> StateVector::probabilities() const {
  std::vector<double> out(dimension());
  simd::active_kernels().probabilities(raw(), out.data(), dimension());
  return out;
}

StateVector uniform_superposition(std::size_t n_qubits) {
  check_qubit_count(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<Complex> amps(dim, Complex{amp, 0.0});
  return StateVector::from_amplitudes(std::move(amps));
}

void apply_h(StateVector& state, std::size_t qubit) {
  const double r = 1.0 / std::sqrt(2.0);
  apply_matrix(state, qubit, r, r, r, -r);
}

void apply_x(StateVector& state, std::size_t qubit) { apply_matrix(state, qubit, 0.0, 1.0, 1.0, 0.0); }

void apply_z(StateVector& state, std::size_t qubit) { apply_matrix(state, qubit, 1.0, 0.0, 0.0, -1.0); }

void apply_ry(StateVector& state, std::size_t qubit, double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rotation angle must be finite");
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  apply_matrix(state, qubit, c, -s, s, c);
}

void apply_rx(StateVector& state, std::size_t qubit, double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rotation angle must be finite");
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  apply_matrix(state, qubit, c, Complex{0.0, -s}, Complex{0.0, -s}, c);
}

void apply_cz(StateVector& state, std::size_t control, std::size_t target) {
  check_qubit_index(state, control);
  check_qubit_index(state, target);
  if (control == target) throw std::invalid_argument("controlled-Z needs two distinct qubits");
  const std::uint64_t both = (std::uint64_t{1} << control) | (std::uint64_t{1} << target);
  auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if ((i & both) == both) amps[i] = -amps[i];
  }
}

void apply_phase_oracle(StateVector& state, std::span<const std::uint8_t> marked) {
  if (marked.size() != state.dimension()) throw std::invalid_argument("marked table size mismatch");
  simd::active_kernels().negate_marked(state.raw(), marked.data(), state.dimension());
}

void apply_phase_oracle(StateVector& state, const std::function<bool(std::uint64_t)>& marked) {
  std::vector<std::uint8_t> table(state.dimension());
  for (std::uint64_t i = 0; i < table.size(); ++i) table[i] = marked(i) ? 1 : 0;
  apply_phase_oracle(state, table);
}

void apply_diffusion(StateVector& state) {
  simd::active_kernels().reflect_about_mean(state.raw(), state.dimension());
}

void apply_diagonal(StateVector& state, std::span<const Complex> phases) {
  if (phases.size() != state.dimension()) throw std::invalid_argument("phase vector size mismatch");
  simd::active_kernels().multiply_elementwise(state.raw(), reinterpret_cast<const double*>(phases.data()),
                                              state.dimension());
}

std::uint64_t measure(const StateVector& state, Rng& rng) {
  const double u = uniform01(rng);
  const auto amps = state.amplitudes();
  double cumulative = 0.0;
  std::uint64_t last_nonzero = 0;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    if (p == 0.0) continue;
    last_nonzero = i;
    cumulative += p;
    if (u < cumulative) return i;
  }
  // u landed in the rounding slack above the accumulated mass
  return last_nonzero;
}

double probability_of(const StateVector& state, std::span<const std::uint64_t> indices) {
  double p = 0.0;
  for (std::uint64_t i : indices) p += state.probability(i);
  return p;
}

}  // namespace qns::qsim
