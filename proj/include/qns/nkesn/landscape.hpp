#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qns::nkesn {

enum class Topology { Adjacent, Random };

/// table[p][i]: loss of output i when its neighbourhood bits read pattern p,
/// where bit j of p is the value of probe bit neighborhoods[i][j].
using LossTable = std::vector<std::vector<double>>;

struct NKLandscape {
  std::size_t n = 0;
  std::size_t k = 0;
  Topology topology = Topology::Adjacent;
  std::vector<std::vector<std::size_t>> neighborhoods;

  /// Throws std::invalid_argument unless each neighbourhood holds K distinct
  /// indices below N (and Adjacent ones are i, i+1, ..., i+K-1 mod N).
  void validate() const;
  /// Pattern index of output i under the full probe mask `bits`.
  std::uint64_t pattern(std::size_t output, const std::vector<std::uint8_t>& bits) const;
};

/// Adjacent: neighbourhood i = {i, ..., i+K-1 mod N}. Random: i followed by
/// K-1 distinct other indices drawn with `seed`. Requires 1 <= K <= N.
NKLandscape make_landscape(std::size_t n, std::size_t k, Topology topology, std::uint64_t seed = 0);

/// (1/N) sum_i table[pattern_i(bits)][i].
double mean_loss(const NKLandscape& land, const LossTable& table, const std::vector<std::uint8_t>& bits);

/// Random table entries uniform in [0, 1).
LossTable random_table(const NKLandscape& land, std::uint64_t seed);

struct LandscapeOptimum {
  std::vector<std::uint8_t> bits;
  double mean_loss = 0.0;
};

/// Exact minimizer of mean_loss on an Adjacent landscape by dynamic
/// programming around the ring: the first K-1 bits are fixed in turn, minimal
/// partial sums are carried over (K-1)-bit windows, and the ring is closed
/// against the fixed prefix. Requires N <= 64 and K <= 12; throws
/// std::invalid_argument for other topologies.
LandscapeOptimum dp_optimize(const NKLandscape& land, const LossTable& table);

/// Minimizer over all 2^N masks (lowest index on ties); N <= 20.
LandscapeOptimum exhaustive_optimize(const NKLandscape& land, const LossTable& table);

/// Rows "output,pattern_bits,loss" with pattern bit 0 first.
void write_table_csv(const NKLandscape& land, const LossTable& table, const std::filesystem::path& path);

std::string bits_to_string(const std::vector<std::uint8_t>& bits);

}  // namespace qns::nkesn
