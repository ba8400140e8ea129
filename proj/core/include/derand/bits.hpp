#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace derand {

/// Bit string with an explicit length. Bit i lives in byte i/8 at position
/// 7-(i%8), i.e. bit 0 is the most significant bit of the first byte. Unused
/// padding bits in the last byte are kept zero so equality is structural.
class BitString {
 public:
  BitString() = default;

  static BitString zeros(std::size_t nbits);
  /// The low `nbits` of `value`, most significant first.
  static BitString from_uint(std::uint64_t value, std::size_t nbits);
  static BitString from_hex(std::string_view hex);
  static BitString from_hex(std::string_view hex, std::size_t nbits);
  static BitString from_bits(std::string_view zeros_and_ones);

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool bit(std::size_t i) const;
  void set_bit(std::size_t i, bool v);
  void append_bit(bool v);
  void append(const BitString& other);

  /// Value of the whole string, requires size() <= 64. Empty string is 0.
  std::uint64_t to_uint() const;
  /// Value of bits [pos, pos+len), len <= 64.
  std::uint64_t slice_uint(std::size_t pos, std::size_t len) const;

  std::string to_hex() const;
  std::string to_bit_string() const;
  std::span<const std::uint8_t> bytes() const { return bytes_; }
  std::size_t popcount() const;

  friend bool operator==(const BitString& a, const BitString& b) = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t nbits_ = 0;
};

/// FNV-1a 64-bit hash; used for config hashes and instance ids.
std::uint64_t fnv1a64(std::string_view data);
std::uint64_t fnv1a64(std::span<const std::uint8_t> data);
std::string to_hex_u64(std::uint64_t v);

}  // namespace derand
