#include "qns/oracle/cost_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace qns::oracle {
namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFFU);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw std::runtime_error("truncated cost Hamiltonian file");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_cost_binary(const qsim::DiagonalCostHamiltonian& h, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  put_le(out, static_cast<std::uint32_t>(h.qubits()));
  for (double c : h.costs()) put_le(out, c);
}

qsim::DiagonalCostHamiltonian read_cost_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const auto n = get_le<std::uint32_t>(in);
  if (n < 1 || n > 30) throw std::runtime_error("cost Hamiltonian header has invalid qubit count");
  std::vector<double> costs(std::size_t{1} << n);
  for (double& c : costs) c = get_le<double>(in);
  if (in.peek() != std::char_traits<char>::eof()) throw std::runtime_error("trailing bytes in cost Hamiltonian file");
  return qsim::DiagonalCostHamiltonian(std::move(costs));
}

void write_cost_csv(const qsim::DiagonalCostHamiltonian& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "index,bitstring,cost\n" << std::setprecision(17);
  for (std::uint64_t x = 0; x < h.dimension(); ++x) {
    std::string bits(h.qubits(), '0');
    for (std::size_t i = 0; i < h.qubits(); ++i) bits[i] = ((x >> i) & 1U) ? '1' : '0';
    out << x << ',' << bits << ',' << h.cost(x) << '\n';
  }
}

}  // namespace qns::oracle
