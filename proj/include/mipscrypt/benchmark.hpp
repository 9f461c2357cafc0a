#pragma once

#include <string_view>

#include "mipscrypt/cipher.hpp"

namespace mipscrypt {

// Hazard-free kernel with one instruction of each class behind CRYPT 1.
// The three NOPs let CRYPT retire before the measured fetches start.
inline constexpr std::string_view kLatencyKernel = R"(
        crypt 1
        nop
        nop
        nop
        add  $3, $1, $2      # R class
        lw   $4, 0($0)       # I class (load)
        j    done            # J class
done:   j    done
)";

// Clock rates of the synthesized designs, used as CLI defaults.
constexpr unsigned long long default_clock_hz(CipherKind k) {
  switch (k) {
    case CipherKind::Des: return 218'000'000ULL;
    case CipherKind::Tdes: return 209'000'000ULL;
    case CipherKind::Aes: return 210'000'000ULL;
  }
  return 218'000'000ULL;
}

}  // namespace mipscrypt
