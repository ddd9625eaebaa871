#include "qns/masknet/dataset.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace qns::masknet {
namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    if (first == std::string::npos) return false;
    const std::string trimmed = cell.substr(first, last - first + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
    if (ec != std::errc{} || ptr != trimmed.data() + trimmed.size()) return false;
    out.push_back(value);
  }
  return !out.empty();
}

}  // namespace

void Dataset::validate() const {
  if (inputs.size() != targets.size()) throw std::invalid_argument("dataset inputs/targets length mismatch");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != inputs.front().size() || targets[i].size() != targets.front().size()) {
      throw std::invalid_argument("dataset row " + std::to_string(i) + " has inconsistent dimensions");
    }
  }
}

double dataset_loss(const MaskedNetwork& net, const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("dataset_loss on an empty dataset");
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Eigen::VectorXd out = net.forward(data.inputs[i]);
    if (out.size() != data.targets[i].size()) throw std::invalid_argument("target dimension mismatch");
    total += (out - data.targets[i]).norm();
  }
  return total / static_cast<double>(data.size());
}

Dataset load_csv(const std::filesystem::path& path, std::size_t input_dim, std::string name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  Dataset data;
  data.name = name.empty() ? path.stem().string() : std::move(name);
  std::string line;
  std::vector<double> row;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!parse_row(line, row)) {
      if (data.empty() && line_no == 1) continue;  // header
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed row");
    }
    if (row.size() <= input_dim) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected more than " +
                               std::to_string(input_dim) + " columns");
    }
    data.inputs.push_back(Eigen::Map<const Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(input_dim)));
    data.targets.push_back(Eigen::Map<const Eigen::VectorXd>(row.data() + input_dim,
                                                             static_cast<Eigen::Index>(row.size() - input_dim)));
  }
  data.validate();
  return data;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    bool first = true;
    for (const Eigen::VectorXd* v : {&data.inputs[i], &data.targets[i]}) {
      for (Eigen::Index j = 0; j < v->size(); ++j) {
        if (!first) out << ',';
        out << (*v)(j);
        first = false;
      }
    }
    out << '\n';
  }
}

}  // namespace qns::masknet
