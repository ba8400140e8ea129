#include "derand/rng.hpp"

#include <bit>
#include <cstring>

#include "derand/error.hpp"

namespace derand {

namespace {

constexpr std::uint32_t kExpandTag = 0x45585044;  // "EXPD"
constexpr std::uint32_t kDeriveTag = 0x44525644;  // "DRVD"

inline std::uint32_t rotl32(std::uint32_t x, int r) { return (x << r) | (x >> (32 - r)); }

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c, std::uint32_t& d) {
  a += b; d ^= a; d = rotl32(d, 16);
  c += d; b ^= c; b = rotl32(b, 12);
  a += b; d ^= a; d = rotl32(d, 8);
  c += d; b ^= c; b = rotl32(b, 7);
}

}  // namespace

void chacha20_block(const std::array<std::uint32_t, 8>& key, std::uint32_t counter,
                    const std::array<std::uint32_t, 3>& nonce, std::uint8_t out[64]) {
  std::uint32_t state[16] = {
      0x61707865, 0x3320646e, 0x79622d32, 0x6b206574,
      key[0], key[1], key[2], key[3],
      key[4], key[5], key[6], key[7],
      counter, nonce[0], nonce[1], nonce[2]};
  std::uint32_t x[16];
  std::memcpy(x, state, sizeof(state));
  for (int round = 0; round < 10; ++round) {
    quarter_round(x[0], x[4], x[8], x[12]);
    quarter_round(x[1], x[5], x[9], x[13]);
    quarter_round(x[2], x[6], x[10], x[14]);
    quarter_round(x[3], x[7], x[11], x[15]);
    quarter_round(x[0], x[5], x[10], x[15]);
    quarter_round(x[1], x[6], x[11], x[12]);
    quarter_round(x[2], x[7], x[8], x[13]);
    quarter_round(x[3], x[4], x[9], x[14]);
  }
  for (int i = 0; i < 16; ++i) {
    std::uint32_t v = x[i] + state[i];
    out[4 * i + 0] = static_cast<std::uint8_t>(v);
    out[4 * i + 1] = static_cast<std::uint8_t>(v >> 8);
    out[4 * i + 2] = static_cast<std::uint8_t>(v >> 16);
    out[4 * i + 3] = static_cast<std::uint8_t>(v >> 24);
  }
}

Stream::Stream(const BitString& seed) {
  if (seed.size() > kMaxSeedBits) {
    throw Error(Errc::SeedTooLong, "stream seeds are limited to 256 bits");
  }
  std::uint8_t key_bytes[32] = {0};
  for (std::size_t i = 0; i < seed.size(); ++i) {
    if (seed.bit(i)) key_bytes[i / 8] |= static_cast<std::uint8_t>(1u << (7 - (i % 8)));
  }
  for (int w = 0; w < 8; ++w) {
    key_[static_cast<std::size_t>(w)] =
        static_cast<std::uint32_t>(key_bytes[4 * w]) |
        (static_cast<std::uint32_t>(key_bytes[4 * w + 1]) << 8) |
        (static_cast<std::uint32_t>(key_bytes[4 * w + 2]) << 16) |
        (static_cast<std::uint32_t>(key_bytes[4 * w + 3]) << 24);
  }
  nonce_ = {kExpandTag, static_cast<std::uint32_t>(seed.size()),
            static_cast<std::uint32_t>(seed.size() >> 32)};
}

Stream Stream::derive(std::uint64_t a) const {
  std::uint8_t block[64];
  chacha20_block(key_, 0,
                 {kDeriveTag, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)},
                 block);
  Stream child;
  for (int w = 0; w < 8; ++w) {
    child.key_[static_cast<std::size_t>(w)] =
        static_cast<std::uint32_t>(block[4 * w]) |
        (static_cast<std::uint32_t>(block[4 * w + 1]) << 8) |
        (static_cast<std::uint32_t>(block[4 * w + 2]) << 16) |
        (static_cast<std::uint32_t>(block[4 * w + 3]) << 24);
  }
  child.nonce_ = {kExpandTag, 0, 0};
  return child;
}

void Stream::refill() {
  chacha20_block(key_, block_, nonce_, buf_.data());
  ++block_;
  pos_ = 0;
}

std::uint64_t Stream::next_u64() {
  if (pos_ + 8 > buf_.size()) refill();
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(buf_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
  }
  pos_ += 8;
  return v;
}

double Stream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint32_t Stream::next_below(std::uint32_t n) {
  if (n == 0) throw Error(Errc::IndexOutOfRange, "next_below(0)");
  if ((n & (n - 1)) == 0) {
    return static_cast<std::uint32_t>(next_u64() & (n - 1));
  }
  std::uint64_t limit = (~0ull / n) * n;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return static_cast<std::uint32_t>(v % n);
  }
}

std::size_t Stream::sample_cumulative(std::span<const double> cumulative) {
  double u = next_unit();
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (u < cumulative[i]) return i;
  }
  return cumulative.size() - 1;
}

BitString Stream::take_bits(std::size_t nbits) {
  BitString out = BitString::zeros(nbits);
  std::size_t i = 0;
  while (i < nbits) {
    if (pos_ >= buf_.size()) refill();
    std::uint8_t byte = buf_[pos_++];
    for (int b = 7; b >= 0 && i < nbits; --b, ++i) {
      out.set_bit(i, (byte >> b) & 1u);
    }
  }
  return out;
}

}  // namespace derand
