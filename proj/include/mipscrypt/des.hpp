#pragma once

// DES and two/three-key Triple-DES (EDE), table-driven over the standard
// FIPS 46-3 tables. Tables use the standard's numbering: bit 1 is the most
// significant bit of the input.

#include <array>
#include <cstdint>

namespace mipscrypt::des {

struct DesKey {
  std::uint64_t bits = 0;  // 56 key bits + 8 ignored parity bits
  friend bool operator==(DesKey, DesKey) = default;
};

struct TdesKey {
  DesKey k1, k2, k3;
};

using Subkeys = std::array<std::uint64_t, 16>;  // K1..K16, 48 bits each

namespace tables {

inline constexpr std::array<std::uint8_t, 64> kIp{
    58, 50, 42, 34, 26, 18, 10, 2, 60, 52, 44, 36, 28, 20, 12, 4,
    62, 54, 46, 38, 30, 22, 14, 6, 64, 56, 48, 40, 32, 24, 16, 8,
    57, 49, 41, 33, 25, 17, 9,  1, 59, 51, 43, 35, 27, 19, 11, 3,
    61, 53, 45, 37, 29, 21, 13, 5, 63, 55, 47, 39, 31, 23, 15, 7};

inline constexpr std::array<std::uint8_t, 64> kIpInv{
    40, 8, 48, 16, 56, 24, 64, 32, 39, 7, 47, 15, 55, 23, 63, 31,
    38, 6, 46, 14, 54, 22, 62, 30, 37, 5, 45, 13, 53, 21, 61, 29,
    36, 4, 44, 12, 52, 20, 60, 28, 35, 3, 43, 11, 51, 19, 59, 27,
    34, 2, 42, 10, 50, 18, 58, 26, 33, 1, 41, 9,  49, 17, 57, 25};

inline constexpr std::array<std::uint8_t, 48> kE{
    32, 1,  2,  3,  4,  5,  4,  5,  6,  7,  8,  9,  8,  9,  10, 11,
    12, 13, 12, 13, 14, 15, 16, 17, 16, 17, 18, 19, 20, 21, 20, 21,
    22, 23, 24, 25, 24, 25, 26, 27, 28, 29, 28, 29, 30, 31, 32, 1};

inline constexpr std::array<std::uint8_t, 32> kP{
    16, 7, 20, 21, 29, 12, 28, 17, 1,  15, 23, 26, 5,  18, 31, 10,
    2,  8, 24, 14, 32, 27, 3,  9,  19, 13, 30, 6,  22, 11, 4,  25};

inline constexpr std::array<std::uint8_t, 56> kPc1{
    57, 49, 41, 33, 25, 17, 9,  1,  58, 50, 42, 34, 26, 18,
    10, 2,  59, 51, 43, 35, 27, 19, 11, 3,  60, 52, 44, 36,
    63, 55, 47, 39, 31, 23, 15, 7,  62, 54, 46, 38, 30, 22,
    14, 6,  61, 53, 45, 37, 29, 21, 13, 5,  28, 20, 12, 4};

inline constexpr std::array<std::uint8_t, 48> kPc2{
    14, 17, 11, 24, 1,  5,  3,  28, 15, 6,  21, 10,
    23, 19, 12, 4,  26, 8,  16, 7,  27, 20, 13, 2,
    41, 52, 31, 37, 47, 55, 30, 40, 51, 45, 33, 48,
    44, 49, 39, 56, 34, 53, 46, 42, 50, 36, 29, 32};

inline constexpr std::array<std::uint8_t, 16> kRotations{1, 1, 2, 2, 2, 2, 2, 2,
                                                         1, 2, 2, 2, 2, 2, 2, 1};

// S1..S8, each 4 rows of 16 columns.
inline constexpr std::uint8_t kS[8][64] = {
    {14, 4,  13, 1, 2,  15, 11, 8,  3,  10, 6,  12, 5,  9,  0, 7,
     0,  15, 7,  4, 14, 2,  13, 1,  10, 6,  12, 11, 9,  5,  3, 8,
     4,  1,  14, 8, 13, 6,  2,  11, 15, 12, 9,  7,  3,  10, 5, 0,
     15, 12, 8,  2, 4,  9,  1,  7,  5,  11, 3,  14, 10, 0,  6, 13},
    {15, 1,  8,  14, 6,  11, 3,  4,  9,  7, 2,  13, 12, 0, 5,  10,
     3,  13, 4,  7,  15, 2,  8,  14, 12, 0, 1,  10, 6,  9, 11, 5,
     0,  14, 7,  11, 10, 4,  13, 1,  5,  8, 12, 6,  9,  3, 2,  15,
     13, 8,  10, 1,  3,  15, 4,  2,  11, 6, 7,  12, 0,  5, 14, 9},
    {10, 0,  9,  14, 6, 3,  15, 5,  1,  13, 12, 7,  11, 4,  2,  8,
     13, 7,  0,  9,  3, 4,  6,  10, 2,  8,  5,  14, 12, 11, 15, 1,
     13, 6,  4,  9,  8, 15, 3,  0,  11, 1,  2,  12, 5,  10, 14, 7,
     1,  10, 13, 0,  6, 9,  8,  7,  4,  15, 14, 3,  11, 5,  2,  12},
    {7,  13, 14, 3, 0,  6,  9,  10, 1,  2, 8, 5,  11, 12, 4,  15,
     13, 8,  11, 5, 6,  15, 0,  3,  4,  7, 2, 12, 1,  10, 14, 9,
     10, 6,  9,  0, 12, 11, 7,  13, 15, 1, 3, 14, 5,  2,  8,  4,
     3,  15, 0,  6, 10, 1,  13, 8,  9,  4, 5, 11, 12, 7,  2,  14},
    {2,  12, 4,  1,  7,  10, 11, 6,  8,  5,  3,  15, 13, 0, 14, 9,
     14, 11, 2,  12, 4,  7,  13, 1,  5,  0,  15, 10, 3,  9, 8,  6,
     4,  2,  1,  11, 10, 13, 7,  8,  15, 9,  12, 5,  6,  3, 0,  14,
     11, 8,  12, 7,  1,  14, 2,  13, 6,  15, 0,  9,  10, 4, 5,  3},
    {12, 1,  10, 15, 9, 2,  6,  8,  0,  13, 3,  4,  14, 7,  5,  11,
     10, 15, 4,  2,  7, 12, 9,  5,  6,  1,  13, 14, 0,  11, 3,  8,
     9,  14, 15, 5,  2, 8,  12, 3,  7,  0,  4,  10, 1,  13, 11, 6,
     4,  3,  2,  12, 9, 5,  15, 10, 11, 14, 1,  7,  6,  0,  8,  13},
    {4,  11, 2,  14, 15, 0, 8,  13, 3,  12, 9, 7,  5,  10, 6, 1,
     13, 0,  11, 7,  4,  9, 1,  10, 14, 3,  5, 12, 2,  15, 8, 6,
     1,  4,  11, 13, 12, 3, 7,  14, 10, 15, 6, 8,  0,  5,  9, 2,
     6,  11, 13, 8,  1,  4, 10, 7,  9,  5,  0, 15, 14, 2,  3, 12},
    {13, 2,  8,  4, 6,  15, 11, 1,  10, 9,  3,  14, 5,  0,  12, 7,
     1,  15, 13, 8, 10, 3,  7,  4,  12, 5,  6,  11, 0,  14, 9,  2,
     7,  11, 4,  1, 9,  12, 14, 2,  0,  6,  10, 13, 15, 3,  5,  8,
     2,  1,  14, 7, 4,  10, 8,  13, 15, 12, 9,  0,  3,  5,  6,  11}};

}  // namespace tables

// Picks bits out of an in_width-bit value. table[i] is the 1-based source
// position (from the MSB) of output bit i+1.
template <std::size_t N>
constexpr std::uint64_t permute(std::uint64_t in, unsigned in_width,
                                const std::array<std::uint8_t, N>& table) {
  std::uint64_t out = 0;
  for (auto pos : table) out = (out << 1) | ((in >> (in_width - pos)) & 1u);
  return out;
}

constexpr std::uint64_t initial_permutation(std::uint64_t b) { return permute(b, 64, tables::kIp); }
constexpr std::uint64_t final_permutation(std::uint64_t b) { return permute(b, 64, tables::kIpInv); }
constexpr std::uint64_t expand(std::uint32_t r) { return permute(r, 32, tables::kE); }

// box in 0..7 (S1..S8). Outer bits pick the row, inner four the column.
constexpr std::uint8_t sbox(unsigned box, unsigned six) {
  const unsigned row = ((six >> 4) & 2u) | (six & 1u);
  const unsigned col = (six >> 1) & 0xFu;
  return tables::kS[box][row * 16 + col];
}

constexpr std::uint32_t substitute(std::uint64_t x48) {
  std::uint32_t out = 0;
  for (unsigned i = 0; i < 8; ++i) out = (out << 4) | sbox(i, (x48 >> (42 - 6 * i)) & 0x3F);
  return out;
}

constexpr std::uint32_t p_permute(std::uint32_t s) {
  return static_cast<std::uint32_t>(permute(s, 32, tables::kP));
}

// Cipher function f(R, K) = P(S(E(R) xor K)).
constexpr std::uint32_t feistel(std::uint32_t r, std::uint64_t subkey) {
  return p_permute(substitute(expand(r) ^ subkey));
}

constexpr Subkeys key_schedule(DesKey key) {
  const std::uint64_t cd = permute(key.bits, 64, tables::kPc1);
  std::uint32_t c = static_cast<std::uint32_t>(cd >> 28) & 0x0FFFFFFF;
  std::uint32_t d = static_cast<std::uint32_t>(cd) & 0x0FFFFFFF;
  auto rotl28 = [](std::uint32_t v, unsigned n) { return ((v << n) | (v >> (28 - n))) & 0x0FFFFFFF; };
  Subkeys ks{};
  for (std::size_t round = 0; round < 16; ++round) {
    c = rotl28(c, tables::kRotations[round]);
    d = rotl28(d, tables::kRotations[round]);
    ks[round] = permute((std::uint64_t{c} << 28) | d, 56, tables::kPc2);
  }
  return ks;
}

// Runs the 16-round network; decryption is the same network with the
// schedule reversed.
constexpr std::uint64_t crypt_block(std::uint64_t block, const Subkeys& ks, bool decrypt) {
  const std::uint64_t ip = initial_permutation(block);
  std::uint32_t l = static_cast<std::uint32_t>(ip >> 32);
  std::uint32_t r = static_cast<std::uint32_t>(ip);
  for (std::size_t n = 0; n < 16; ++n) {
    const std::uint64_t k = decrypt ? ks[15 - n] : ks[n];
    const std::uint32_t next_r = l ^ feistel(r, k);
    l = r;
    r = next_r;
  }
  return final_permutation((std::uint64_t{r} << 32) | l);
}

constexpr std::uint64_t encrypt(std::uint64_t block, DesKey key) {
  return crypt_block(block, key_schedule(key), false);
}

constexpr std::uint64_t decrypt(std::uint64_t block, DesKey key) {
  return crypt_block(block, key_schedule(key), true);
}

constexpr std::uint64_t tdes_encrypt(std::uint64_t block, const TdesKey& key) {
  return encrypt(decrypt(encrypt(block, key.k1), key.k2), key.k3);
}

constexpr std::uint64_t tdes_decrypt(std::uint64_t block, const TdesKey& key) {
  return decrypt(encrypt(decrypt(block, key.k3), key.k2), key.k1);
}

// Precomputed schedules for repeated use by the memory paths.
class Des {
 public:
  explicit Des(DesKey key) : ks_(key_schedule(key)) {}
  std::uint64_t encrypt(std::uint64_t b) const { return crypt_block(b, ks_, false); }
  std::uint64_t decrypt(std::uint64_t b) const { return crypt_block(b, ks_, true); }
  const Subkeys& subkeys() const { return ks_; }

 private:
  Subkeys ks_;
};

class Tdes {
 public:
  explicit Tdes(const TdesKey& key) : k1_(key.k1), k2_(key.k2), k3_(key.k3) {}
  std::uint64_t encrypt(std::uint64_t b) const { return k3_.encrypt(k2_.decrypt(k1_.encrypt(b))); }
  std::uint64_t decrypt(std::uint64_t b) const { return k1_.decrypt(k2_.encrypt(k3_.decrypt(b))); }

 private:
  Des k1_, k2_, k3_;
};

}  // namespace mipscrypt::des
