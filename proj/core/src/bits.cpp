#include "derand/bits.hpp"

#include <bit>

#include "derand/error.hpp"

namespace derand {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NonStochasticRow: return "NonStochasticRow";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::InvalidDistribution: return "InvalidDistribution";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::SymbolOutOfRange: return "SymbolOutOfRange";
    case Errc::RateTooLarge: return "RateTooLarge";
    case Errc::EmptyAlphabet: return "EmptyAlphabet";
    case Errc::DegreeTooSmall: return "DegreeTooSmall";
    case Errc::InfeasibleDegreeSequence: return "InfeasibleDegreeSequence";
    case Errc::RejectionBudgetExhausted: return "RejectionBudgetExhausted";
    case Errc::ComponentCountMismatch: return "ComponentCountMismatch";
    case Errc::InfeasibleOccurrenceBound: return "InfeasibleOccurrenceBound";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::OutputTooLong: return "OutputTooLong";
    case Errc::SeedTooLong: return "SeedTooLong";
    case Errc::FamilyTooLarge: return "FamilyTooLarge";
    case Errc::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::RetriesExhausted: return "RetriesExhausted";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

BitString BitString::zeros(std::size_t nbits) {
  BitString s;
  s.nbits_ = nbits;
  s.bytes_.assign((nbits + 7) / 8, 0);
  return s;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t nbits) {
  if (nbits > 64) throw Error(Errc::LengthMismatch, "from_uint limited to 64 bits");
  BitString s = zeros(nbits);
  for (std::size_t i = 0; i < nbits; ++i) {
    s.set_bit(i, (value >> (nbits - 1 - i)) & 1u);
  }
  return s;
}

static int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

BitString BitString::from_hex(std::string_view hex) {
  return from_hex(hex, hex.size() * 4);
}

BitString BitString::from_hex(std::string_view hex, std::size_t nbits) {
  if (nbits > hex.size() * 4) {
    throw Error(Errc::LengthMismatch, "hex string too short for requested bit count");
  }
  BitString s = zeros(nbits);
  for (std::size_t i = 0; i < nbits; ++i) {
    int nib = hex_nibble(hex[i / 4]);
    if (nib < 0) throw Error(Errc::ConfigError, "invalid hex digit in seed");
    s.set_bit(i, (nib >> (3 - (i % 4))) & 1);
  }
  return s;
}

BitString BitString::from_bits(std::string_view zeros_and_ones) {
  BitString s = zeros(zeros_and_ones.size());
  for (std::size_t i = 0; i < zeros_and_ones.size(); ++i) {
    char c = zeros_and_ones[i];
    if (c != '0' && c != '1') throw Error(Errc::ConfigError, "invalid bit character");
    s.set_bit(i, c == '1');
  }
  return s;
}

bool BitString::bit(std::size_t i) const {
  if (i >= nbits_) throw Error(Errc::IndexOutOfRange, "bit index past end");
  return (bytes_[i / 8] >> (7 - (i % 8))) & 1u;
}

void BitString::set_bit(std::size_t i, bool v) {
  if (i >= nbits_) throw Error(Errc::IndexOutOfRange, "bit index past end");
  std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - (i % 8)));
  if (v) {
    bytes_[i / 8] |= mask;
  } else {
    bytes_[i / 8] &= static_cast<std::uint8_t>(~mask);
  }
}

void BitString::append_bit(bool v) {
  if (nbits_ % 8 == 0) bytes_.push_back(0);
  ++nbits_;
  set_bit(nbits_ - 1, v);
}

void BitString::append(const BitString& other) {
  for (std::size_t i = 0; i < other.size(); ++i) append_bit(other.bit(i));
}

std::uint64_t BitString::to_uint() const {
  if (nbits_ > 64) throw Error(Errc::LengthMismatch, "to_uint limited to 64 bits");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < nbits_; ++i) v = (v << 1) | (bit(i) ? 1u : 0u);
  return v;
}

std::uint64_t BitString::slice_uint(std::size_t pos, std::size_t len) const {
  if (len > 64) throw Error(Errc::LengthMismatch, "slice limited to 64 bits");
  if (pos + len > nbits_) throw Error(Errc::IndexOutOfRange, "slice past end");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < len; ++i) v = (v << 1) | (bit(pos + i) ? 1u : 0u);
  return v;
}

std::string BitString::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  std::size_t nibbles = (nbits_ + 3) / 4;
  out.reserve(nibbles);
  for (std::size_t j = 0; j < nibbles; ++j) {
    int v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      std::size_t i = j * 4 + b;
      v = (v << 1) | (i < nbits_ && bit(i) ? 1 : 0);
    }
    out.push_back(digits[v]);
  }
  return out;
}

std::string BitString::to_bit_string() const {
  std::string out;
  out.reserve(nbits_);
  for (std::size_t i = 0; i < nbits_; ++i) out.push_back(bit(i) ? '1' : '0');
  return out;
}

std::size_t BitString::popcount() const {
  std::size_t total = 0;
  for (std::uint8_t b : bytes_) total += static_cast<std::size_t>(std::popcount(b));
  return total;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : data) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string to_hex_u64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace derand
