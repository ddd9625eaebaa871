#include "qns/distill/distill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>

#include "qns/common.hpp"
#include "qns/grover/grover.hpp"
#include "qns/masknet/serialization.hpp"
#include "qns/oracle/oracle.hpp"

namespace qns::distill {

using masknet::Activation;
using masknet::FlatMask;
using masknet::LayerSpec;
using masknet::MaskedNetwork;

ActivationTrace record_activations(const MaskedNetwork& net, const masknet::Dataset& data) {
  data.validate();
  ActivationTrace trace;
  trace.activations.assign(net.depth(), {});
  for (const auto& x : data.inputs) {
    const auto t = net.forward_trace(x);
    for (std::size_t l = 0; l < net.depth(); ++l) trace.activations[l].push_back(t.outputs[l]);
  }
  return trace;
}

Eigen::VectorXd compress(const Eigen::VectorXd& v, std::size_t target_dim, CompressMode mode) {
  const auto dim = static_cast<std::size_t>(v.size());
  if (target_dim == 0) throw std::invalid_argument("compress target dimension must be positive");
  if (dim < target_dim) {
    throw std::invalid_argument("cannot compress " + std::to_string(dim) + " values to " + std::to_string(target_dim));
  }
  if (mode == CompressMode::AveragePool) {
    if (dim % target_dim != 0) {
      throw std::invalid_argument("average pooling needs " + std::to_string(target_dim) + " to divide " +
                                  std::to_string(dim));
    }
    const std::size_t group = dim / target_dim;
    Eigen::VectorXd out(static_cast<Eigen::Index>(target_dim));
    for (std::size_t g = 0; g < target_dim; ++g) {
      out(static_cast<Eigen::Index>(g)) =
          v.segment(static_cast<Eigen::Index>(g * group), static_cast<Eigen::Index>(group)).mean();
    }
    return out;
  }
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(v(static_cast<Eigen::Index>(a))) > std::abs(v(static_cast<Eigen::Index>(b)));
  });
  order.resize(target_dim);
  std::sort(order.begin(), order.end());
  Eigen::VectorXd out(static_cast<Eigen::Index>(target_dim));
  for (std::size_t i = 0; i < target_dim; ++i) out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(order[i]));
  return out;
}

void TeacherStudentPair::validate() const {
  if (blocks.size() != teacher.depth()) throw std::invalid_argument("student must hold one block per teacher layer");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    const auto& t = teacher.spec(i);
    if (b.depth() != 2) throw std::invalid_argument("student blocks must have two layers");
    if (b.input_dim() != t.fan_in) throw std::invalid_argument("block input width differs from the teacher layer");
    if (b.spec(0).fan_out < t.fan_out || b.output_dim() < t.fan_out) {
      throw std::invalid_argument("student layer narrower than the teacher layer");
    }
  }
}

TeacherStudentPair make_pair(MaskedNetwork teacher, const StudentConfig& config) {
  if (!(config.width_factor >= 1.0)) throw std::invalid_argument("width_factor must be at least 1");
  if (config.output_factor == 0) throw std::invalid_argument("output_factor must be positive");
  TeacherStudentPair pair{std::move(teacher), {}, config.width_factor};
  Rng rng(config.seed);
  for (const auto& t : pair.teacher.specs()) {
    const auto hidden = static_cast<std::size_t>(std::ceil(config.width_factor * static_cast<double>(t.fan_out)));
    std::vector<LayerSpec> specs{{t.fan_in, hidden, config.hidden_activation},
                                 {hidden, t.fan_out * config.output_factor, t.activation}};
    pair.blocks.push_back(MaskedNetwork::random(std::move(specs), rng()));
  }
  pair.validate();
  return pair;
}

masknet::MaskLayout block_layout(const MaskedNetwork& block) { return masknet::layer_layout(block, 0, 2); }

std::vector<Eigen::VectorXd> block_outputs(const MaskedNetwork& block, const std::vector<Eigen::VectorXd>& inputs,
                                           std::size_t target_dim, CompressMode mode) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(inputs.size());
  for (const auto& x : inputs) out.push_back(compress(block.forward(x), target_dim, mode));
  return out;
}

double block_loss(const std::vector<Eigen::VectorXd>& teacher_activations, const MaskedNetwork& block,
                  const std::vector<Eigen::VectorXd>& inputs, CompressMode mode) {
  if (inputs.empty() || inputs.size() != teacher_activations.size()) {
    throw std::invalid_argument("block loss needs one teacher activation per input");
  }
  const auto target = static_cast<std::size_t>(teacher_activations.front().size());
  double sum = 0.0;
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    const Eigen::VectorXd out = compress(block.forward(inputs[s]), target, mode);
    if (out.size() != teacher_activations[s].size()) throw std::invalid_argument("block/teacher dimension mismatch");
    sum += (teacher_activations[s] - out).norm();
  }
  return sum / static_cast<double>(inputs.size());
}

qsim::DiagonalCostHamiltonian block_cost_hamiltonian(const std::vector<Eigen::VectorXd>& teacher_activations,
                                                     const MaskedNetwork& block,
                                                     const std::vector<Eigen::VectorXd>& inputs, CompressMode mode) {
  const auto layout = block_layout(block);
  if (layout.size() > 30) throw std::invalid_argument("block too wide to enumerate");
  std::vector<double> costs(std::size_t{1} << layout.size());
  for (std::uint64_t x = 0; x < costs.size(); ++x) {
    const auto view = masknet::apply_flat_mask(block, FlatMask::from_index(x, layout));
    costs[x] = block_loss(teacher_activations, view, inputs, mode);
  }
  return qsim::DiagonalCostHamiltonian(std::move(costs));
}

namespace {

std::uint64_t argmin(std::span<const double> v) {
  return static_cast<std::uint64_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

std::uint64_t select_index(const qsim::DiagonalCostHamiltonian& h, const DistillConfig& config, std::size_t block,
                           Rng& rng, BlockResult& out) {
  const auto& costs = h.costs();
  switch (config.backend) {
    case Backend::Exhaustive:
      out.oracle_calls = costs.size();
      return argmin(costs);
    case Backend::Grover: {
      double eps = 0.0;
      if (config.grover_epsilons) {
        if (block >= config.grover_epsilons->size()) throw std::invalid_argument("missing Grover epsilon for block");
        eps = (*config.grover_epsilons)[block];
      } else {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 16; ++i) best = std::min(best, costs[rng() % costs.size()]);
        // a zero best would make the threshold reject its own witness
        eps = best > 0.0 ? 1.1 * best : std::numeric_limits<double>::min();
      }
      out.epsilon = eps;
      oracle::ThresholdOracle o(std::vector<double>(costs.begin(), costs.end()), eps);
      const auto r = grover::search_unknown_k(o, rng());
      out.oracle_calls = r.oracle_calls;
      if (!r.measured_good) {
        throw MethodFailure("Grover found no block " + std::to_string(block) + " mask below epsilon " +
                            std::to_string(eps) + " within " + std::to_string(r.oracle_calls) + " oracle calls");
      }
      return r.index;
    }
    case Backend::Qaoa: {
      auto qc = config.qaoa;
      qc.optimizer.seed = rng();
      return variational::qaoa_run(h, qc).mode_index;
    }
    case Backend::Anneal: {
      const auto probs = anneal::anneal(h, config.anneal).final_state.probabilities();
      return static_cast<std::uint64_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
    }
  }
  throw std::invalid_argument("unknown distillation backend");
}

}  // namespace

DistillResult distill_select(const TeacherStudentPair& pair, const masknet::Dataset& data,
                             const DistillConfig& config) {
  pair.validate();
  data.validate();
  if (data.empty()) throw std::invalid_argument("distillation needs validation samples");
  if (config.backend != Backend::Exhaustive && config.per_block_bit_budget > max_qubits()) {
    throw std::invalid_argument("per-block bit budget " + std::to_string(config.per_block_bit_budget) +
                                " exceeds the qubit ceiling " + std::to_string(max_qubits()));
  }
  const auto teacher = record_activations(pair.teacher, data);
  Rng rng(config.seed);
  DistillResult result;
  std::vector<Eigen::VectorXd> inputs = data.inputs;
  for (std::size_t i = 0; i < pair.blocks.size(); ++i) {
    const auto& block = pair.blocks[i];
    const auto layout = block_layout(block);
    if (layout.size() > config.per_block_bit_budget) {
      throw std::invalid_argument("block " + std::to_string(i) + " has " + std::to_string(layout.size()) +
                                  " maskable weights, over the budget of " +
                                  std::to_string(config.per_block_bit_budget));
    }
    const auto h = block_cost_hamiltonian(teacher.activations[i], block, inputs, config.compress);
    BlockResult br;
    const std::uint64_t x = select_index(h, config, i, rng, br);
    br.mask = FlatMask::from_index(x, layout);
    br.loss = h.cost(x);
    br.exhaustive_min = h.min_cost();
    br.gap = br.loss - br.exhaustive_min;
    br.inputs = inputs;
    const auto target = pair.teacher.spec(i).fan_out;
    std::vector<Eigen::VectorXd> next =
        config.chaining == Chaining::Student
            ? block_outputs(masknet::apply_flat_mask(block, br.mask), inputs, target, config.compress)
            : teacher.activations[i];
    result.total_loss += br.loss;
    result.blocks.push_back(std::move(br));
    inputs = std::move(next);
  }
  return result;
}

std::vector<std::vector<Eigen::VectorXd>> replay_student(const TeacherStudentPair& pair,
                                                         const std::vector<FlatMask>& masks,
                                                         const masknet::Dataset& data, CompressMode mode) {
  if (masks.size() != pair.blocks.size()) throw std::invalid_argument("need one mask per student block");
  std::vector<std::vector<Eigen::VectorXd>> outs;
  std::vector<Eigen::VectorXd> inputs = data.inputs;
  for (std::size_t i = 0; i < pair.blocks.size(); ++i) {
    inputs = block_outputs(masknet::apply_flat_mask(pair.blocks[i], masks[i]), inputs, pair.teacher.spec(i).fan_out,
                           mode);
    outs.push_back(inputs);
  }
  return outs;
}

double student_total_loss(const TeacherStudentPair& pair, const std::vector<FlatMask>& masks,
                          const masknet::Dataset& data, CompressMode mode) {
  const auto teacher = record_activations(pair.teacher, data);
  std::vector<Eigen::VectorXd> inputs = data.inputs;
  double total = 0.0;
  for (std::size_t i = 0; i < pair.blocks.size(); ++i) {
    const auto view = masknet::apply_flat_mask(pair.blocks[i], masks.at(i));
    total += block_loss(teacher.activations[i], view, inputs, mode);
    inputs = block_outputs(view, inputs, pair.teacher.spec(i).fan_out, mode);
  }
  return total;
}

MaskedNetwork fit_linear_teacher(const masknet::Dataset& data) {
  data.validate();
  if (data.empty()) throw std::invalid_argument("cannot fit a teacher to an empty dataset");
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto d = static_cast<Eigen::Index>(data.input_dim());
  const auto m = static_cast<Eigen::Index>(data.target_dim());
  Eigen::MatrixXd a(n, d + 1);
  Eigen::MatrixXd y(n, m);
  for (Eigen::Index s = 0; s < n; ++s) {
    a.row(s).head(d) = data.inputs[static_cast<std::size_t>(s)].transpose();
    a(s, d) = 1.0;
    y.row(s) = data.targets[static_cast<std::size_t>(s)].transpose();
  }
  const Eigen::MatrixXd beta = a.completeOrthogonalDecomposition().solve(y);
  masknet::LayerParameters p{beta.topRows(d), beta.row(d).transpose()};
  return MaskedNetwork::from_parameters({{static_cast<std::size_t>(d), static_cast<std::size_t>(m), Activation::Identity}},
                                        {std::move(p)});
}

nlohmann::json result_to_json(const DistillResult& result) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : result.blocks) {
    blocks.push_back({{"mask", masknet::flat_mask_to_json(b.mask)},
                      {"loss", b.loss},
                      {"exhaustive_min", b.exhaustive_min},
                      {"gap", b.gap},
                      {"epsilon", b.epsilon ? nlohmann::json(*b.epsilon) : nlohmann::json(nullptr)},
                      {"oracle_calls", b.oracle_calls}});
  }
  return {{"total_loss", result.total_loss}, {"blocks", std::move(blocks)}};
}

}  // namespace qns::distill
