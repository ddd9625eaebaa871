#pragma once

#include <filesystem>

#include "qns/qsim/hamiltonian.hpp"

namespace qns::oracle {

// Binary layout: uint32 little-endian n, then 2^n little-endian IEEE-754
// float64 costs in basis-index order.
void write_cost_binary(const qsim::DiagonalCostHamiltonian& h, const std::filesystem::path& path);
qsim::DiagonalCostHamiltonian read_cost_binary(const std::filesystem::path& path);

// CSV: "index,bitstring,cost" with the bitstring written mask bit 0 first.
void write_cost_csv(const qsim::DiagonalCostHamiltonian& h, const std::filesystem::path& path);

}  // namespace qns::oracle
