#pragma once

// Architectural state: register file, key register, instruction and data
// memories, and the reset/run protocol.

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mipscrypt/cipher.hpp"
#include "mipscrypt/error.hpp"

namespace mipscrypt {

inline constexpr std::size_t kDefaultMemoryBytes = 256;
inline constexpr std::size_t kMaxMemoryBytes = 4096;  // 2^10 words

class RegisterFile {
 public:
  std::uint32_t read(unsigned r) const { return r == 0 ? 0 : regs_.at(r); }
  void write(unsigned r, std::uint32_t v) {
    if (r != 0) regs_.at(r) = v;
  }
  void clear() { regs_.fill(0); }
  const std::array<std::uint32_t, 32>& values() const { return regs_; }
  friend bool operator==(const RegisterFile&, const RegisterFile&) = default;

 private:
  std::array<std::uint32_t, 32> regs_{};
};

class KeyRegister {
 public:
  void load_word(unsigned slot, std::uint32_t value) {
    if (slot > 3) throw Error("key slot out of range: " + std::to_string(slot));
    words_[slot] = value;
  }
  std::uint32_t word(unsigned slot) const { return words_.at(slot); }
  const KeyWords& words() const { return words_; }
  void set(const KeyWords& k) { words_ = k; }

  std::uint64_t des_key() const { return des::DesKey(mipscrypt::des_key(words_)).bits; }
  friend bool operator==(const KeyRegister&, const KeyRegister&) = default;

 private:
  KeyWords words_{};
};

// Byte-addressable, big-endian word access on 4-byte boundaries.
class Memory {
 public:
  explicit Memory(std::size_t capacity = kDefaultMemoryBytes) : bytes_(capacity, 0) {
    if (capacity < 16 || capacity > kMaxMemoryBytes || !std::has_single_bit(capacity))
      throw Error("memory capacity must be a power of two in [16, " + std::to_string(kMaxMemoryBytes) +
                  "], got " + std::to_string(capacity));
  }

  std::size_t capacity() const { return bytes_.size(); }
  bool read_only() const { return read_only_; }
  void set_read_only(bool ro) { read_only_ = ro; }

  std::uint32_t read_word(std::uint32_t addr) const {
    check(addr, 4);
    return std::uint32_t{bytes_[addr]} << 24 | std::uint32_t{bytes_[addr + 1]} << 16 |
           std::uint32_t{bytes_[addr + 2]} << 8 | bytes_[addr + 3];
  }

  void write_word(std::uint32_t addr, std::uint32_t v) {
    check_writable();
    check(addr, 4);
    for (int i = 0; i < 4; ++i) bytes_[addr + i] = static_cast<std::uint8_t>(v >> (24 - 8 * i));
  }

  std::span<const std::uint8_t> block(std::uint32_t addr, std::size_t len) const {
    check(addr, len);
    return {bytes_.data() + addr, len};
  }

  void write_block(std::uint32_t addr, std::span<const std::uint8_t> data) {
    check_writable();
    check(addr, data.size());
    std::copy(data.begin(), data.end(), bytes_.begin() + addr);
  }

  void clear() { std::fill(bytes_.begin(), bytes_.end(), 0); }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  friend bool operator==(const Memory& a, const Memory& b) { return a.bytes_ == b.bytes_; }

 private:
  void check(std::uint32_t addr, std::size_t len) const {
    if (len >= 4 && addr % 4 != 0) throw MemoryFault(addr, "misaligned access");
    if (std::uint64_t{addr} + len > bytes_.size()) throw MemoryFault(addr, "address out of range");
  }
  void check_writable() const {
    if (read_only_) throw ProtocolError("instruction memory is read-only while running");
  }

  std::vector<std::uint8_t> bytes_;
  bool read_only_ = false;
};

enum class Mode : std::uint8_t { Reset, Running };

struct MachineConfig {
  CipherKind cipher = CipherKind::Des;
  std::size_t imem_bytes = kDefaultMemoryBytes;
  std::size_t dmem_bytes = kDefaultMemoryBytes;
};

class MachineState {
 public:
  explicit MachineState(const MachineConfig& cfg = {})
      : cipher_kind_(cfg.cipher), imem_(cfg.imem_bytes), dmem_(cfg.dmem_bytes) {}

  std::uint32_t pc = 0;
  RegisterFile rf;
  KeyRegister keys;
  bool crypt_enabled = false;

  Mode mode() const { return mode_; }
  CipherKind cipher() const { return cipher_kind_; }
  const Memory& imem() const { return imem_; }
  const Memory& dmem() const { return dmem_; }
  Memory& dmem() { return dmem_; }
  // Byte address one past the last loaded image word.
  std::uint32_t image_end() const { return image_end_; }
  std::uint32_t image_base() const { return image_base_; }

  // Writes memory and register contents while in reset mode. `keys` preloads
  // the key register the same way the external bus can.
  void reset_load(std::span<const std::uint32_t> image, std::span<const std::uint8_t> dmem_init = {},
                  std::uint32_t at = 0, std::optional<KeyWords> preload_keys = {}) {
    if (mode_ != Mode::Reset) throw ProtocolError("reset_load requires reset mode");
    if (at % 4) throw MemoryFault(at, "misaligned image base");
    if (std::uint64_t{at} + image.size() * 4 > imem_.capacity())
      throw MemoryFault(at, "image of " + std::to_string(image.size()) + " words exceeds " +
                                std::to_string(imem_.capacity()) + "-byte instruction memory");
    if (dmem_init.size() > dmem_.capacity())
      throw MemoryFault(0, "data preload exceeds data memory");
    imem_.clear();
    dmem_.clear();
    for (std::size_t i = 0; i < image.size(); ++i) imem_.write_word(at + 4 * static_cast<std::uint32_t>(i), image[i]);
    dmem_.write_block(0, dmem_init);
    rf.clear();
    keys.set(preload_keys.value_or(KeyWords{}));
    pc = at;
    crypt_enabled = false;
    image_base_ = at;
    image_end_ = at + static_cast<std::uint32_t>(image.size() * 4);
  }

  void start() {
    if (mode_ == Mode::Running) throw ProtocolError("processor already running");
    mode_ = Mode::Running;
    imem_.set_read_only(true);
  }

  void write_imem_word(std::uint32_t addr, std::uint32_t v) { imem_.write_word(addr, v); }

  void load_key_word(unsigned slot, std::uint32_t value) { keys.load_word(slot, value); }

  const BlockCipher& cipher_engine() const {
    if (!engine_ || engine_->key() != keys.words()) engine_.emplace(cipher_kind_, keys.words());
    return *engine_;
  }

  // Instruction fetch; with `decrypt` the containing cipher block is run
  // through the decryption core.
  std::uint32_t fetch_word(std::uint32_t addr, bool decrypt) const {
    if (!decrypt) return imem_.read_word(addr);
    return crypt_read(imem_, addr);
  }

  std::uint32_t encrypted_load_word(std::uint32_t addr) const {
    if (!crypt_enabled) return dmem_.read_word(addr);
    return crypt_read(dmem_, addr);
  }

  // Block-granular read-modify-write when crypt mode is on.
  void encrypted_store_word(std::uint32_t addr, std::uint32_t value) {
    if (!crypt_enabled) return dmem_.write_word(addr, value);
    (void)dmem_.read_word(addr);  // range/alignment
    const BlockCipher& c = cipher_engine();
    const std::uint32_t base = addr & ~static_cast<std::uint32_t>(c.block_size() - 1);
    auto src = dmem_.block(base, c.block_size());
    std::array<std::uint8_t, 16> buf{};
    std::span<std::uint8_t> blk(buf.data(), c.block_size());
    std::copy(src.begin(), src.end(), blk.begin());
    c.decrypt(blk);
    const std::uint32_t off = addr - base;
    for (int i = 0; i < 4; ++i) blk[off + i] = static_cast<std::uint8_t>(value >> (24 - 8 * i));
    c.encrypt(blk);
    dmem_.write_block(base, blk);
  }

 private:
  std::uint32_t crypt_read(const Memory& mem, std::uint32_t addr) const {
    (void)mem.read_word(addr);
    const BlockCipher& c = cipher_engine();
    const std::uint32_t base = addr & ~static_cast<std::uint32_t>(c.block_size() - 1);
    auto src = mem.block(base, c.block_size());
    std::array<std::uint8_t, 16> buf{};
    std::span<std::uint8_t> blk(buf.data(), c.block_size());
    std::copy(src.begin(), src.end(), blk.begin());
    c.decrypt(blk);
    const std::uint32_t off = addr - base;
    return std::uint32_t{blk[off]} << 24 | std::uint32_t{blk[off + 1]} << 16 |
           std::uint32_t{blk[off + 2]} << 8 | blk[off + 3];
  }

  CipherKind cipher_kind_;
  Memory imem_;
  Memory dmem_;
  Mode mode_ = Mode::Reset;
  std::uint32_t image_base_ = 0;
  std::uint32_t image_end_ = 0;
  mutable std::optional<BlockCipher> engine_;
};

}  // namespace mipscrypt
