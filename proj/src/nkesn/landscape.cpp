#include "qns/nkesn/landscape.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qns/common.hpp"

namespace qns::nkesn {

void NKLandscape::validate() const {
  if (k == 0 || k > n) throw std::invalid_argument("NK landscape needs 1 <= K <= N");
  if (neighborhoods.size() != n) throw std::invalid_argument("NK landscape needs one neighbourhood per output");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nb = neighborhoods[i];
    if (nb.size() != k) throw std::invalid_argument("neighbourhood size differs from K");
    std::vector<std::size_t> sorted = nb;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.back() >= n) {
      throw std::invalid_argument("neighbourhood indices must be distinct and below N");
    }
    if (topology == Topology::Adjacent) {
      for (std::size_t j = 0; j < k; ++j) {
        if (nb[j] != (i + j) % n) throw std::invalid_argument("adjacent neighbourhood is not i..i+K-1 mod N");
      }
    }
  }
}

std::uint64_t NKLandscape::pattern(std::size_t output, const std::vector<std::uint8_t>& bits) const {
  if (bits.size() != n) throw std::invalid_argument("probe mask length differs from N");
  std::uint64_t p = 0;
  const auto& nb = neighborhoods.at(output);
  for (std::size_t j = 0; j < nb.size(); ++j) p |= static_cast<std::uint64_t>(bits[nb[j]] & 1U) << j;
  return p;
}

NKLandscape make_landscape(std::size_t n, std::size_t k, Topology topology, std::uint64_t seed) {
  NKLandscape land{n, k, topology, {}};
  if (k == 0 || k > n) throw std::invalid_argument("NK landscape needs 1 <= K <= N");
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> nb{i};
    if (topology == Topology::Adjacent) {
      for (std::size_t j = 1; j < k; ++j) nb.push_back((i + j) % n);
    } else {
      std::vector<std::size_t> others;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) others.push_back(j);
      // partial Fisher-Yates with the engine directly keeps draws portable
      for (std::size_t j = 0; j + 1 < k; ++j) {
        const std::size_t pick = j + static_cast<std::size_t>(rng() % (others.size() - j));
        std::swap(others[j], others[pick]);
        nb.push_back(others[j]);
      }
    }
    land.neighborhoods.push_back(std::move(nb));
  }
  land.validate();
  return land;
}

namespace {

void check_table(const NKLandscape& land, const LossTable& table) {
  if (table.size() != (std::size_t{1} << land.k)) throw std::invalid_argument("loss table needs 2^K rows");
  for (const auto& row : table)
    if (row.size() != land.n) throw std::invalid_argument("loss table rows need N entries");
}

}  // namespace

double mean_loss(const NKLandscape& land, const LossTable& table, const std::vector<std::uint8_t>& bits) {
  check_table(land, table);
  double sum = 0.0;
  for (std::size_t i = 0; i < land.n; ++i) sum += table[land.pattern(i, bits)][i];
  return sum / static_cast<double>(land.n);
}

LossTable random_table(const NKLandscape& land, std::uint64_t seed) {
  Rng rng(seed);
  LossTable t(std::size_t{1} << land.k, std::vector<double>(land.n));
  for (auto& row : t)
    for (auto& v : row) v = uniform01(rng);
  return t;
}

LandscapeOptimum dp_optimize(const NKLandscape& land, const LossTable& table) {
  land.validate();
  check_table(land, table);
  if (land.topology != Topology::Adjacent) {
    throw std::invalid_argument("dynamic programming needs an adjacent landscape; use exhaustive or per-output search");
  }
  if (land.n > 64 || land.k > 12) throw std::invalid_argument("dp_optimize supports N <= 64 and K <= 12");
  const std::size_t n = land.n;
  const std::size_t k = land.k;
  const std::size_t states = std::size_t{1} << (k - 1);
  const std::uint64_t window_mask = (std::uint64_t{1} << k) - 1;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Bits 0..K-2 are fixed to each prefix in turn. Before bit j is assigned the
  // state holds bits j-K+1..j-1 (state bit t = b_{j-K+1+t}); assigning bit j
  // completes the window that starts at j-K+1.
  double best_total = kInf;
  std::vector<std::uint8_t> best_bits;
  for (std::uint64_t prefix = 0; prefix < states; ++prefix) {
    std::vector<double> cost(states, kInf);
    cost[prefix] = 0.0;
    struct Parent {
      std::uint32_t state;
      std::uint8_t bit;
    };
    std::vector<std::vector<Parent>> parents(n);
    for (std::size_t j = k - 1; j < n; ++j) {
      std::vector<double> next(states, kInf);
      parents[j].assign(states, {0, 0});
      const std::size_t start = j + 1 - k;
      for (std::uint64_t s = 0; s < states; ++s) {
        if (cost[s] == kInf) continue;
        for (std::uint64_t v = 0; v < 2; ++v) {
          const std::uint64_t pattern = s | (v << (k - 1));
          const std::uint64_t ns = pattern >> 1;
          const double c = cost[s] + table[pattern][start];
          if (c < next[ns]) {
            next[ns] = c;
            parents[j][ns] = {static_cast<std::uint32_t>(s), static_cast<std::uint8_t>(v)};
          }
        }
      }
      cost = std::move(next);
    }
    // Close the ring: windows N-K+1..N-1 read the final state then the prefix.
    for (std::uint64_t s = 0; s < states; ++s) {
      if (cost[s] == kInf) continue;
      double total = cost[s];
      const std::uint64_t ext = s | (prefix << (k - 1));
      for (std::size_t u = 0; u + 1 < k; ++u) total += table[(ext >> u) & window_mask][n - k + 1 + u];
      if (total < best_total) {
        best_total = total;
        std::vector<std::uint8_t> bits(n, 0);
        for (std::size_t t = 0; t + 1 < k; ++t) bits[t] = static_cast<std::uint8_t>((prefix >> t) & 1U);
        std::uint64_t state = s;
        for (std::size_t j = n; j-- > k - 1;) {
          const Parent p = parents[j][state];
          bits[j] = p.bit;
          state = p.state;
        }
        best_bits = std::move(bits);
      }
    }
  }
  return {best_bits, mean_loss(land, table, best_bits)};
}

LandscapeOptimum exhaustive_optimize(const NKLandscape& land, const LossTable& table) {
  land.validate();
  check_table(land, table);
  if (land.n > 20) throw std::invalid_argument("exhaustive scan supports N <= 20");
  LandscapeOptimum best{{}, std::numeric_limits<double>::infinity()};
  std::vector<std::uint8_t> bits(land.n);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << land.n); ++x) {
    for (std::size_t b = 0; b < land.n; ++b) bits[b] = static_cast<std::uint8_t>((x >> b) & 1U);
    const double v = mean_loss(land, table, bits);
    if (v < best.mean_loss) best = {bits, v};
  }
  return best;
}

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

void write_table_csv(const NKLandscape& land, const LossTable& table, const std::filesystem::path& path) {
  check_table(land, table);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out.precision(17);
  out << "output,pattern_bits,loss\n";
  for (std::size_t i = 0; i < land.n; ++i) {
    for (std::uint64_t p = 0; p < table.size(); ++p) {
      std::vector<std::uint8_t> bits(land.k);
      for (std::size_t j = 0; j < land.k; ++j) bits[j] = static_cast<std::uint8_t>((p >> j) & 1U);
      out << i << ',' << bits_to_string(bits) << ',' << table[p][i] << '\n';
    }
  }
}

}  // namespace qns::nkesn
