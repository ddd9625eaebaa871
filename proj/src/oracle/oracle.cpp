#include "qns/oracle/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qns::oracle {

QueryOracle::QueryOracle(std::size_t n_qubits) : n_qubits_(n_qubits) { qsim::check_qubit_count(n_qubits); }

bool QueryOracle::is_good(std::uint64_t index) {
  if (index >= search_space()) throw std::out_of_range("oracle query index out of range");
  calls_.fetch_add(1, std::memory_order_relaxed);
  return evaluate(index);
}

void QueryOracle::apply_phase(qsim::StateVector& state) {
  if (state.qubits() != n_qubits_) throw std::invalid_argument("oracle/state qubit count mismatch");
  calls_.fetch_add(1, std::memory_order_relaxed);
  qsim::apply_phase_oracle(state, marked_table());
}

const std::vector<std::uint8_t>& QueryOracle::marked_table() {
  if (!marked_) {
    std::vector<std::uint8_t> table(search_space());
    for (std::uint64_t i = 0; i < table.size(); ++i) table[i] = evaluate(i) ? 1 : 0;
    marked_ = std::move(table);
  }
  return *marked_;
}

std::uint64_t QueryOracle::solution_count() {
  const auto& t = marked_table();
  return static_cast<std::uint64_t>(std::count(t.begin(), t.end(), std::uint8_t{1}));
}

ThresholdOracle::ThresholdOracle(std::vector<double> costs, double epsilon)
    : QueryOracle(costs.size() >= 2 && std::has_single_bit(costs.size())
                      ? static_cast<std::size_t>(std::countr_zero(costs.size()))
                      : throw std::invalid_argument("cost table length must be 2^n with n >= 1")),
      costs_(std::move(costs)),
      epsilon_(epsilon) {}

bool ThresholdOracle::evaluate(std::uint64_t index) const { return costs_[index] < epsilon_; }

namespace {

std::size_t checked_width(const masknet::MaskedNetwork& net, const std::optional<masknet::MaskLayout>& layout) {
  const std::size_t n = layout ? layout->size() : net.parameter_count();
  if (n > max_qubits()) {
    throw std::invalid_argument("mask width " + std::to_string(n) + " exceeds the qubit ceiling " +
                                std::to_string(max_qubits()));
  }
  return n;
}

}  // namespace

SubnetworkOracle::SubnetworkOracle(masknet::MaskedNetwork net, masknet::Dataset data, double epsilon,
                                   std::optional<masknet::MaskLayout> layout)
    : QueryOracle(checked_width(net, layout)),
      net_(std::move(net)),
      data_(std::move(data)),
      epsilon_(epsilon),
      layout_(layout ? std::move(*layout) : masknet::weight_layout(net_)) {
  if (!(epsilon_ >= 0.0)) throw std::invalid_argument("oracle epsilon must be non-negative");
  masknet::validate_layout(net_, layout_);
  data_.validate();
  if (data_.empty()) throw std::invalid_argument("oracle needs a nonempty dataset");
}

bool SubnetworkOracle::is_good(const masknet::FlatMask& mask) {
  if (mask.size() != layout_.size()) throw std::invalid_argument("mask length does not match the oracle layout");
  return QueryOracle::is_good(mask.to_index());
}

double SubnetworkOracle::loss(std::uint64_t index) const {
  masknet::MaskedNetwork view = net_;
  masknet::assign_flat_mask(view, masknet::FlatMask::from_index(index, layout_));
  return masknet::dataset_loss(view, data_);
}

bool SubnetworkOracle::evaluate(std::uint64_t index) const { return loss(index) < epsilon_; }

qsim::DiagonalCostHamiltonian build_cost_hamiltonian(const masknet::MaskedNetwork& net, const masknet::Dataset& data,
                                                     const masknet::MaskLayout& layout) {
  const std::size_t n = layout.size();
  if (n < 1 || n > max_qubits()) {
    throw std::invalid_argument("cannot enumerate 2^" + std::to_string(n) + " masks (ceiling " +
                                std::to_string(max_qubits()) + ")");
  }
  masknet::validate_layout(net, layout);
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<double> costs(dim);
  masknet::MaskedNetwork view = net;
  for (std::uint64_t x = 0; x < dim; ++x) {
    masknet::assign_flat_mask(view, masknet::FlatMask::from_index(x, layout));
    costs[x] = masknet::dataset_loss(view, data);
  }
  return qsim::DiagonalCostHamiltonian(std::move(costs));
}

qsim::DiagonalCostHamiltonian build_cost_hamiltonian(const masknet::MaskedNetwork& net, const masknet::Dataset& data,
                                                     std::size_t bit_count) {
  if (bit_count != net.parameter_count()) {
    throw std::invalid_argument("bit count " + std::to_string(bit_count) + " != network parameter count " +
                                std::to_string(net.parameter_count()));
  }
  return build_cost_hamiltonian(net, data, masknet::weight_layout(net));
}

std::uint64_t count_solutions(const qsim::DiagonalCostHamiltonian& h, double epsilon) {
  const auto costs = h.costs();
  return static_cast<std::uint64_t>(std::count_if(costs.begin(), costs.end(), [&](double c) { return c < epsilon; }));
}

double default_epsilon(const masknet::MaskedNetwork& net, const masknet::Dataset& data,
                       const masknet::MaskLayout& layout, std::uint64_t seed, std::size_t samples) {
  if (samples == 0) throw std::invalid_argument("default_epsilon needs at least one sample");
  Rng rng(seed);
  std::vector<double> losses;
  masknet::MaskedNetwork view = net;
  masknet::FlatMask mask = masknet::FlatMask::ones(layout);
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& b : mask.bits) b = static_cast<std::uint8_t>(rng() & 1U);
    masknet::assign_flat_mask(view, mask);
    losses.push_back(masknet::dataset_loss(view, data));
  }
  std::sort(losses.begin(), losses.end());
  const std::size_t mid = losses.size() / 2;
  const double median = losses.size() % 2 == 1 ? losses[mid] : 0.5 * (losses[mid - 1] + losses[mid]);
  return 0.5 * median;
}

}  // namespace qns::oracle
