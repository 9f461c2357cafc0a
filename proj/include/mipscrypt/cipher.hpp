#pragma once

// Block-cipher facade used by the memory paths: picks DES, two-key TDES or
// AES-128 and derives its key from the four 32-bit key-register words.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "mipscrypt/aes.hpp"
#include "mipscrypt/des.hpp"
#include "mipscrypt/error.hpp"

namespace mipscrypt {

enum class CipherKind : std::uint8_t { Des, Tdes, Aes };

constexpr std::size_t block_bytes(CipherKind k) { return k == CipherKind::Aes ? 16 : 8; }
constexpr unsigned block_bits(CipherKind k) { return static_cast<unsigned>(block_bytes(k) * 8); }

inline std::string_view to_string(CipherKind k) {
  switch (k) {
    case CipherKind::Des: return "des";
    case CipherKind::Tdes: return "tdes";
    case CipherKind::Aes: return "aes";
  }
  return "?";
}

inline std::optional<CipherKind> parse_cipher(std::string_view s) {
  if (s == "des") return CipherKind::Des;
  if (s == "tdes") return CipherKind::Tdes;
  if (s == "aes") return CipherKind::Aes;
  return std::nullopt;
}

// words[0] = K0 (least significant) .. words[3] = K3 (most significant).
using KeyWords = std::array<std::uint32_t, 4>;

// 32 hex digits, most significant first: "K3K2K1K0".
inline KeyWords parse_key_hex(std::string_view hex) {
  if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
  if (hex.size() != 32) throw Error("key must be 32 hex characters, got " + std::to_string(hex.size()));
  KeyWords k{};
  for (std::size_t i = 0; i < 32; ++i) {
    const char c = hex[i];
    unsigned d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else throw Error(std::string("bad hex digit in key: '") + c + "'");
    auto& w = k[3 - i / 8];
    w = (w << 4) | d;
  }
  return k;
}

inline des::DesKey des_key(const KeyWords& k) {
  return {std::uint64_t{k[1]} << 32 | k[0]};
}

// Two-key EDE: k1 = k3 = K1||K0, k2 = K3||K2.
inline des::TdesKey tdes_key(const KeyWords& k) {
  const des::DesKey outer = des_key(k);
  return {outer, {std::uint64_t{k[3]} << 32 | k[2]}, outer};
}

inline aes::AesKey128 aes_key(const KeyWords& k) {
  aes::AesKey128 key{};
  for (int w = 0; w < 4; ++w)
    for (int b = 0; b < 4; ++b) key[4 * w + b] = static_cast<std::uint8_t>(k[3 - w] >> (24 - 8 * b));
  return key;
}

class BlockCipher {
 public:
  BlockCipher(CipherKind kind, const KeyWords& key) : kind_(kind), key_(key), impl_(make(kind, key)) {}

  CipherKind kind() const { return kind_; }
  const KeyWords& key() const { return key_; }
  std::size_t block_size() const { return block_bytes(kind_); }

  // In place over exactly block_size() bytes.
  void encrypt(std::span<std::uint8_t> block) const { apply(block, false); }
  void decrypt(std::span<std::uint8_t> block) const { apply(block, true); }

 private:
  using Impl = std::variant<des::Des, des::Tdes, aes::Aes128>;

  static Impl make(CipherKind kind, const KeyWords& key) {
    switch (kind) {
      case CipherKind::Des: return des::Des(des_key(key));
      case CipherKind::Tdes: return des::Tdes(tdes_key(key));
      case CipherKind::Aes: break;
    }
    return aes::Aes128(aes_key(key));
  }

  void apply(std::span<std::uint8_t> block, bool dec) const {
    if (block.size() != block_size()) throw Error("cipher block size mismatch");
    if (auto* a = std::get_if<aes::Aes128>(&impl_)) {
      aes::Block128 b{};
      std::copy(block.begin(), block.end(), b.begin());
      b = dec ? a->decrypt(b) : a->encrypt(b);
      std::copy(b.begin(), b.end(), block.begin());
      return;
    }
    std::uint64_t v = 0;
    for (auto byte : block) v = (v << 8) | byte;
    std::visit(
        [&](const auto& c) {
          if constexpr (!std::is_same_v<std::decay_t<decltype(c)>, aes::Aes128>)
            v = dec ? c.decrypt(v) : c.encrypt(v);
        },
        impl_);
    for (int i = 7; i >= 0; --i, v >>= 8) block[i] = static_cast<std::uint8_t>(v);
  }

  CipherKind kind_;
  KeyWords key_;
  Impl impl_;
};

// ECB over a word image. The image is padded with NOP (zero) words up to a
// whole number of cipher blocks before encryption.
inline std::vector<std::uint32_t> encrypt_image(std::vector<std::uint32_t> words, CipherKind kind,
                                                const KeyWords& key, bool decrypt = false) {
  const std::size_t per_block = block_bytes(kind) / 4;
  while (words.size() % per_block) words.push_back(0);
  const BlockCipher cipher(kind, key);
  std::vector<std::uint8_t> buf(block_bytes(kind));
  for (std::size_t base = 0; base < words.size(); base += per_block) {
    for (std::size_t i = 0; i < per_block; ++i)
      for (int b = 0; b < 4; ++b) buf[4 * i + b] = static_cast<std::uint8_t>(words[base + i] >> (24 - 8 * b));
    decrypt ? cipher.decrypt(buf) : cipher.encrypt(buf);
    for (std::size_t i = 0; i < per_block; ++i)
      words[base + i] = std::uint32_t{buf[4 * i]} << 24 | std::uint32_t{buf[4 * i + 1]} << 16 |
                        std::uint32_t{buf[4 * i + 2]} << 8 | buf[4 * i + 3];
  }
  return words;
}

inline std::vector<std::uint32_t> decrypt_image(std::vector<std::uint32_t> words, CipherKind kind,
                                                const KeyWords& key) {
  return encrypt_image(std::move(words), kind, key, true);
}

}  // namespace mipscrypt
