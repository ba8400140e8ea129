#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "derand/bits.hpp"

namespace derand {

/// ChaCha20 block function (RFC 8439): 256-bit key as 8 little-endian words,
/// 32-bit block counter, 96-bit nonce as 3 little-endian words. Writes the
/// 64-byte keystream block.
void chacha20_block(const std::array<std::uint32_t, 8>& key, std::uint32_t counter,
                    const std::array<std::uint32_t, 3>& nonce, std::uint8_t out[64]);

/// Deterministic random stream backed by the ChaCha20 keystream.
///
/// A root stream is keyed by a bit string of up to 256 bits: the bits are
/// packed into the key buffer MSB-first and zero-padded, and the nonce tags
/// the bit length so "0" and "00" key distinct streams. Child streams are
/// derived by a one-block PRF under a separate nonce tag, so a stream tree
/// rooted at one seed is reproducible bit-for-bit on every platform and
/// independent of evaluation order.
class Stream {
 public:
  static constexpr std::size_t kMaxSeedBits = 256;

  explicit Stream(const BitString& seed);

  /// Child stream; children with distinct indices are independent.
  Stream derive(std::uint64_t a) const;
  Stream derive(std::uint64_t a, std::uint64_t b) const { return derive(a).derive(b); }
  Stream derive_label(std::string_view label) const { return derive(fnv1a64(label)); }

  std::uint64_t next_u64();
  /// Uniform in [0,1) with 53 random bits.
  double next_unit();
  /// Uniform in {0,...,n-1}, unbiased via rejection. n >= 1.
  std::uint32_t next_below(std::uint32_t n);
  /// Index of the first cumulative weight exceeding a fresh unit draw.
  std::size_t sample_cumulative(std::span<const double> cumulative);

  /// Raw keystream as a bit string; consumes from the stream position.
  BitString take_bits(std::size_t nbits);

 private:
  Stream() = default;

  std::array<std::uint32_t, 8> key_{};
  std::array<std::uint32_t, 3> nonce_{};
  std::uint32_t block_ = 0;
  std::array<std::uint8_t, 64> buf_{};
  std::size_t pos_ = 64;

  void refill();
};

}  // namespace derand
