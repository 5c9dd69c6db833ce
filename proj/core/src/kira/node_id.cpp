#include "nin/kira/node_id.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <openssl/evp.h>

namespace nin::kira {

NodeId NodeId::random(sim::Rng& rng) {
  Bytes bytes{};
  for (std::size_t i = 0; i < kBytes; i += 8) {
    std::uint64_t word = rng.next_u64();
    for (std::size_t j = 0; j < 8 && i + j < kBytes; ++j) {
      bytes[i + j] = static_cast<std::uint8_t>(word >> (56 - 8 * j));
    }
  }
  return NodeId(bytes);
}

std::optional<NodeId> NodeId::from_hex(std::string_view hex) {
  if (hex.size() != 2 * kBytes) {
    return std::nullopt;
  }
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes bytes{};
  for (std::size_t i = 0; i < kBytes; ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      return std::nullopt;
    }
    bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return NodeId(bytes);
}

NodeId NodeId::single_bit(std::size_t index) {
  if (index >= kIdBits) {
    throw std::out_of_range("bit index out of range");
  }
  Bytes bytes{};
  bytes[index / 8] = static_cast<std::uint8_t>(0x80U >> (index % 8));
  return NodeId(bytes);
}

bool NodeId::is_zero() const {
  return std::all_of(bytes_.begin(), bytes_.end(), [](std::uint8_t b) { return b == 0; });
}

std::string NodeId::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(2 * kBytes, '0');
  for (std::size_t i = 0; i < kBytes; ++i) {
    out[2 * i] = kDigits[bytes_[i] >> 4];
    out[2 * i + 1] = kDigits[bytes_[i] & 0xF];
  }
  return out;
}

bool Distance::is_zero() const {
  return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

Distance xor_distance(const NodeId& a, const NodeId& b) {
  Distance d;
  for (std::size_t i = 0; i < NodeId::kBytes; ++i) {
    d.bytes[i] = a.bytes()[i] ^ b.bytes()[i];
  }
  return d;
}

std::size_t shared_prefix_length(const NodeId& a, const NodeId& b) {
  for (std::size_t i = 0; i < NodeId::kBytes; ++i) {
    const auto x = static_cast<std::uint8_t>(a.bytes()[i] ^ b.bytes()[i]);
    if (x != 0) {
      return 8 * i + static_cast<std::size_t>(std::countl_zero(x));
    }
  }
  return kIdBits;
}

NodeId key_to_id(std::string_view key) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(key.data(), key.size(), digest, &length, EVP_sha256(), nullptr) != 1 || length < NodeId::kBytes) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  NodeId::Bytes bytes{};
  std::copy_n(digest, NodeId::kBytes, bytes.begin());
  return NodeId(bytes);
}

}  // namespace nin::kira
