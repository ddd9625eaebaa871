#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qns/masknet/network.hpp"

namespace qns::masknet {

/// One maskable parameter: weight (layer, row, col), or bias (layer, col)
/// when `bias` is set.
struct MaskSlot {
  std::size_t layer = 0;
  std::size_t row = 0;
  std::size_t col = 0;
  bool bias = false;

  bool operator==(const MaskSlot&) const = default;
};

/// Bit index -> parameter. Bit i of a basis index is bit i of the mask.
using MaskLayout = std::vector<MaskSlot>;

/// All weights, layer-major then row-major; biases appended per layer when
/// requested.
MaskLayout weight_layout(const MaskedNetwork& net, bool include_biases = false);

/// Weights of layers [first, first + count) only.
MaskLayout layer_layout(const MaskedNetwork& net, std::size_t first, std::size_t count);

/// Throws std::invalid_argument unless every slot is in range and distinct.
void validate_layout(const MaskedNetwork& net, const MaskLayout& layout);

/// A bitstring over a layout: the search variable of every selection method.
struct FlatMask {
  std::vector<std::uint8_t> bits;
  MaskLayout layout;

  std::size_t size() const noexcept { return bits.size(); }

  static FlatMask ones(MaskLayout layout);
  /// Bit i of `index` becomes bits[i]; layouts longer than 64 bits are
  /// rejected.
  static FlatMask from_index(std::uint64_t index, MaskLayout layout);
  /// Reads the network's current masks at the layout's slots.
  static FlatMask extract(const MaskedNetwork& net, MaskLayout layout);
  /// Inverse of to_hex().
  static FlatMask from_hex(std::string_view hex, MaskLayout layout);

  std::uint64_t to_index() const;
  /// Hex of the integer sum_i bits[i] 2^i, most significant nibble first,
  /// ceil(size/4) digits.
  std::string to_hex() const;
  /// bits[0] first.
  std::string to_bitstring() const;
  std::size_t count_ones() const;
};

/// Writes mask bits into `net` at the layout's slots; other entries are left
/// untouched. Throws std::invalid_argument on a length mismatch.
void assign_flat_mask(MaskedNetwork& net, const FlatMask& mask);

/// Mask view of `net` with `mask` applied; the weights stay shared.
MaskedNetwork apply_flat_mask(const MaskedNetwork& net, const FlatMask& mask);

}  // namespace qns::masknet
