#include "qns/masknet/flat_mask.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

namespace qns::masknet {

MaskLayout weight_layout(const MaskedNetwork& net, bool include_biases) {
  MaskLayout layout;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const LayerSpec& s = net.spec(l);
    for (std::size_t r = 0; r < s.fan_in; ++r) {
      for (std::size_t c = 0; c < s.fan_out; ++c) layout.push_back({l, r, c, false});
    }
    if (include_biases) {
      for (std::size_t c = 0; c < s.fan_out; ++c) layout.push_back({l, 0, c, true});
    }
  }
  return layout;
}

MaskLayout layer_layout(const MaskedNetwork& net, std::size_t first, std::size_t count) {
  if (first + count > net.depth()) throw std::invalid_argument("layer range exceeds network depth");
  MaskLayout layout;
  for (std::size_t l = first; l < first + count; ++l) {
    const LayerSpec& s = net.spec(l);
    for (std::size_t r = 0; r < s.fan_in; ++r) {
      for (std::size_t c = 0; c < s.fan_out; ++c) layout.push_back({l, r, c, false});
    }
  }
  return layout;
}

void validate_layout(const MaskedNetwork& net, const MaskLayout& layout) {
  std::set<std::tuple<std::size_t, std::size_t, std::size_t, bool>> seen;
  for (const MaskSlot& s : layout) {
    if (s.layer >= net.depth()) throw std::invalid_argument("layout slot layer out of range");
    const LayerSpec& spec = net.spec(s.layer);
    if (s.col >= spec.fan_out || (!s.bias && s.row >= spec.fan_in) || (s.bias && s.row != 0)) {
      throw std::invalid_argument("layout slot out of range");
    }
    if (!seen.emplace(s.layer, s.row, s.col, s.bias).second) throw std::invalid_argument("layout slot repeated");
  }
}

FlatMask FlatMask::ones(MaskLayout layout) {
  FlatMask m;
  m.bits.assign(layout.size(), 1);
  m.layout = std::move(layout);
  return m;
}

FlatMask FlatMask::from_index(std::uint64_t index, MaskLayout layout) {
  if (layout.size() > 64) throw std::invalid_argument("index encoding limited to 64 bits");
  if (layout.size() < 64 && (index >> layout.size()) != 0) throw std::invalid_argument("index exceeds mask width");
  FlatMask m;
  m.bits.resize(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) m.bits[i] = static_cast<std::uint8_t>((index >> i) & 1U);
  m.layout = std::move(layout);
  return m;
}

FlatMask FlatMask::extract(const MaskedNetwork& net, MaskLayout layout) {
  validate_layout(net, layout);
  FlatMask m;
  m.bits.reserve(layout.size());
  for (const MaskSlot& s : layout) {
    const double v = s.bias ? net.bias_mask(s.layer)(static_cast<Eigen::Index>(s.col))
                            : net.mask(s.layer)(static_cast<Eigen::Index>(s.row), static_cast<Eigen::Index>(s.col));
    m.bits.push_back(v != 0.0 ? 1 : 0);
  }
  m.layout = std::move(layout);
  return m;
}

FlatMask FlatMask::from_hex(std::string_view hex, MaskLayout layout) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  FlatMask m;
  m.bits.assign(layout.size(), 0);
  m.layout = std::move(layout);
  std::size_t bit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it) {
    const char ch = *it;
    int nibble = 0;
    if (ch >= '0' && ch <= '9') nibble = ch - '0';
    else if (ch >= 'a' && ch <= 'f') nibble = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F') nibble = ch - 'A' + 10;
    else throw std::invalid_argument("invalid hex digit in mask");
    for (int k = 0; k < 4; ++k, ++bit) {
      const bool set = (nibble >> k) & 1;
      if (bit < m.bits.size()) m.bits[bit] = set ? 1 : 0;
      else if (set) throw std::invalid_argument("hex mask wider than layout");
    }
  }
  return m;
}

std::uint64_t FlatMask::to_index() const {
  if (bits.size() > 64) throw std::invalid_argument("index encoding limited to 64 bits");
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) x |= static_cast<std::uint64_t>(bits[i] & 1U) << i;
  return x;
}

std::string FlatMask::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = std::max<std::size_t>(1, (bits.size() + 3) / 4);
  std::string out(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    int nibble = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t i = 4 * d + k;
      if (i < bits.size() && bits[i]) nibble |= 1 << k;
    }
    out[digits - 1 - d] = kDigits[nibble];
  }
  return out;
}

std::string FlatMask::to_bitstring() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

std::size_t FlatMask::count_ones() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

void assign_flat_mask(MaskedNetwork& net, const FlatMask& mask) {
  if (mask.bits.size() != mask.layout.size()) throw std::invalid_argument("mask bits/layout length mismatch");
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    const MaskSlot& s = mask.layout[i];
    if (s.bias) net.set_bias_mask_entry(s.layer, s.col, mask.bits[i] != 0);
    else net.set_mask_entry(s.layer, s.row, s.col, mask.bits[i] != 0);
  }
}

MaskedNetwork apply_flat_mask(const MaskedNetwork& net, const FlatMask& mask) {
  MaskedNetwork view = net;
  assign_flat_mask(view, mask);
  return view;
}

}  // namespace qns::masknet
