#pragma once

// AES-128 (Nk = 4, Nb = 4, Nr = 10). The state is kept as the 16 block
// bytes in their natural order, which is the column-major 4x4 layout:
// state(row, col) = bytes[row + 4 * col].

#include <array>
#include <cstdint>
#include <span>

namespace mipscrypt::aes {

using Block128 = std::array<std::uint8_t, 16>;
using AesKey128 = std::array<std::uint8_t, 16>;
using RoundKeys = std::array<std::uint32_t, 44>;

inline constexpr int kNb = 4;
inline constexpr int kNk = 4;
inline constexpr int kNr = 10;

struct AesState {
  std::array<std::uint8_t, 16> bytes{};

  constexpr std::uint8_t& at(int row, int col) { return bytes[row + 4 * col]; }
  constexpr std::uint8_t at(int row, int col) const { return bytes[row + 4 * col]; }
  friend bool operator==(const AesState&, const AesState&) = default;
};

// Multiplication in GF(2^8) modulo m(x) = x^8 + x^4 + x^3 + x + 1.
constexpr std::uint8_t xtime(std::uint8_t a) {
  return static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? 0x1B : 0x00));
}

constexpr std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t p = 0;
  while (b) {
    if (b & 1) p ^= a;
    a = xtime(a);
    b >>= 1;
  }
  return p;
}

namespace detail {

constexpr std::uint8_t gf_inverse(std::uint8_t a) {
  if (a == 0) return 0;
  for (unsigned b = 1; b < 256; ++b)
    if (gf_mul(a, static_cast<std::uint8_t>(b)) == 1) return static_cast<std::uint8_t>(b);
  return 0;
}

constexpr std::uint8_t rotl8(std::uint8_t v, unsigned n) {
  return static_cast<std::uint8_t>((v << n) | (v >> (8 - n)));
}

constexpr std::array<std::uint8_t, 256> make_sbox() {
  std::array<std::uint8_t, 256> s{};
  for (unsigned x = 0; x < 256; ++x) {
    const std::uint8_t b = gf_inverse(static_cast<std::uint8_t>(x));
    s[x] = static_cast<std::uint8_t>(b ^ rotl8(b, 1) ^ rotl8(b, 2) ^ rotl8(b, 3) ^ rotl8(b, 4) ^ 0x63);
  }
  return s;
}

constexpr std::array<std::uint8_t, 256> invert(const std::array<std::uint8_t, 256>& s) {
  std::array<std::uint8_t, 256> inv{};
  for (unsigned x = 0; x < 256; ++x) inv[s[x]] = static_cast<std::uint8_t>(x);
  return inv;
}

}  // namespace detail

inline constexpr std::array<std::uint8_t, 256> kSbox = detail::make_sbox();
inline constexpr std::array<std::uint8_t, 256> kInvSbox = detail::invert(kSbox);
static_assert(kSbox[0x00] == 0x63 && kSbox[0x53] == 0xED);

// --- round transformations ----------------------------------------------

constexpr AesState sub_bytes(AesState s) {
  for (auto& b : s.bytes) b = kSbox[b];
  return s;
}

constexpr AesState inv_sub_bytes(AesState s) {
  for (auto& b : s.bytes) b = kInvSbox[b];
  return s;
}

constexpr AesState shift_rows(const AesState& s) {
  AesState out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.at(r, c) = s.at(r, (c + r) % 4);
  return out;
}

constexpr AesState inv_shift_rows(const AesState& s) {
  AesState out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.at(r, (c + r) % 4) = s.at(r, c);
  return out;
}

using Column = std::array<std::uint8_t, 4>;

// Column times a(x) = {03}x^3 + {01}x^2 + {01}x + {02} modulo x^4 + 1.
constexpr Column mix_column(const Column& a) {
  Column o{};
  for (int r = 0; r < 4; ++r)
    o[r] = static_cast<std::uint8_t>(gf_mul(a[r], 2) ^ gf_mul(a[(r + 1) % 4], 3) ^ a[(r + 2) % 4] ^
                                     a[(r + 3) % 4]);
  return o;
}

// Inverse polynomial {0B}x^3 + {0D}x^2 + {09}x + {0E}.
constexpr Column inv_mix_column(const Column& a) {
  Column o{};
  for (int r = 0; r < 4; ++r)
    o[r] = static_cast<std::uint8_t>(gf_mul(a[r], 0x0E) ^ gf_mul(a[(r + 1) % 4], 0x0B) ^
                                     gf_mul(a[(r + 2) % 4], 0x0D) ^ gf_mul(a[(r + 3) % 4], 0x09));
  return o;
}

namespace detail {
template <class F>
constexpr AesState per_column(const AesState& s, F f) {
  AesState out;
  for (int c = 0; c < 4; ++c) {
    const Column col = f(Column{s.at(0, c), s.at(1, c), s.at(2, c), s.at(3, c)});
    for (int r = 0; r < 4; ++r) out.at(r, c) = col[r];
  }
  return out;
}
}  // namespace detail

constexpr AesState mix_columns(const AesState& s) { return detail::per_column(s, mix_column); }
constexpr AesState inv_mix_columns(const AesState& s) { return detail::per_column(s, inv_mix_column); }

// rk holds Nb words; word c is XORed into column c, most significant byte
// into row 0.
constexpr AesState add_round_key(AesState s, std::span<const std::uint32_t, 4> rk) {
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) s.at(r, c) ^= static_cast<std::uint8_t>(rk[c] >> (24 - 8 * r));
  return s;
}

// --- key expansion --------------------------------------------------------

constexpr std::uint32_t sub_word(std::uint32_t w) {
  return std::uint32_t{kSbox[w >> 24]} << 24 | std::uint32_t{kSbox[(w >> 16) & 0xFF]} << 16 |
         std::uint32_t{kSbox[(w >> 8) & 0xFF]} << 8 | kSbox[w & 0xFF];
}

constexpr std::uint32_t rot_word(std::uint32_t w) { return (w << 8) | (w >> 24); }

constexpr RoundKeys key_expansion(const AesKey128& key) {
  RoundKeys w{};
  for (int i = 0; i < kNk; ++i)
    w[i] = std::uint32_t{key[4 * i]} << 24 | std::uint32_t{key[4 * i + 1]} << 16 |
           std::uint32_t{key[4 * i + 2]} << 8 | key[4 * i + 3];
  std::uint8_t rcon = 0x01;
  for (int i = kNk; i < kNb * (kNr + 1); ++i) {
    std::uint32_t t = w[i - 1];
    if (i % kNk == 0) {
      t = sub_word(rot_word(t)) ^ (std::uint32_t{rcon} << 24);
      rcon = xtime(rcon);
    }
    w[i] = w[i - kNk] ^ t;
  }
  return w;
}

// --- full cipher ----------------------------------------------------------

namespace detail {
constexpr std::span<const std::uint32_t, 4> round_key(const RoundKeys& w, int round) {
  return std::span<const std::uint32_t, 4>(w.data() + 4 * round, 4);
}
}  // namespace detail

constexpr Block128 encrypt_with(const Block128& in, const RoundKeys& w) {
  AesState s{in};
  s = add_round_key(s, detail::round_key(w, 0));
  for (int round = 1; round < kNr; ++round)
    s = add_round_key(mix_columns(shift_rows(sub_bytes(s))), detail::round_key(w, round));
  s = add_round_key(shift_rows(sub_bytes(s)), detail::round_key(w, kNr));
  return s.bytes;
}

constexpr Block128 decrypt_with(const Block128& in, const RoundKeys& w) {
  AesState s{in};
  s = add_round_key(s, detail::round_key(w, kNr));
  for (int round = kNr - 1; round >= 1; --round)
    s = inv_mix_columns(add_round_key(inv_sub_bytes(inv_shift_rows(s)), detail::round_key(w, round)));
  s = add_round_key(inv_sub_bytes(inv_shift_rows(s)), detail::round_key(w, 0));
  return s.bytes;
}

constexpr Block128 encrypt(const Block128& in, const AesKey128& key) {
  return encrypt_with(in, key_expansion(key));
}

constexpr Block128 decrypt(const Block128& in, const AesKey128& key) {
  return decrypt_with(in, key_expansion(key));
}

class Aes128 {
 public:
  explicit Aes128(const AesKey128& key) : w_(key_expansion(key)) {}
  Block128 encrypt(const Block128& b) const { return encrypt_with(b, w_); }
  Block128 decrypt(const Block128& b) const { return decrypt_with(b, w_); }
  const RoundKeys& round_keys() const { return w_; }

 private:
  RoundKeys w_;
};

}  // namespace mipscrypt::aes
