#pragma once

// Switching-activity accounting over the four pipeline latches.

#include <array>
#include <bit>
#include <cstdint>

namespace mipscrypt {

enum LatchId : std::size_t { kIfId = 0, kIdEx = 1, kExMem = 2, kMemWb = 3 };

// 32-bit words per latch: IF/ID {pc, instr}; ID/EX {pc, instr, a, b, imm,
// ctrl}; EX/MEM {result, store data, ctrl}; MEM/WB {value, ctrl}.
inline constexpr std::array<std::size_t, 4> kLatchWords{2, 6, 3, 2};

using LatchImage = std::array<std::uint32_t, 6>;
using LatchImages = std::array<LatchImage, 4>;

struct ActivityCounters {
  std::array<std::uint64_t, 4> toggles{};
  std::uint64_t cycles = 0;
  std::uint64_t gated_cycles = 0;

  std::uint64_t total_toggles() const { return toggles[0] + toggles[1] + toggles[2] + toggles[3]; }

  static constexpr std::uint64_t latch_bits() {
    return 32 * (kLatchWords[0] + kLatchWords[1] + kLatchWords[2] + kLatchWords[3]);
  }

  // Toggles per latch bit per cycle.
  double e_sw() const {
    if (cycles == 0) return 0.0;
    return static_cast<double>(total_toggles()) / static_cast<double>(latch_bits() * cycles);
  }
};

// Adds the Hamming distance between successive latch contents. On a gated
// cycle the EX/MEM latch is held at zero, whatever it would have carried.
inline ActivityCounters record_cycle(ActivityCounters c, const LatchImages& prev, LatchImages next,
                                     bool gated = false) {
  if (gated) next[kExMem].fill(0);
  for (std::size_t l = 0; l < 4; ++l)
    for (std::size_t w = 0; w < kLatchWords[l]; ++w)
      c.toggles[l] += static_cast<std::uint64_t>(std::popcount(prev[l][w] ^ next[l][w]));
  ++c.cycles;
  if (gated) ++c.gated_cycles;
  return c;
}

}  // namespace mipscrypt
