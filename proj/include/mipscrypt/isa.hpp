#pragma once

// Instruction encodings for the 32-bit MIPS subset plus the three crypto
// extensions (LKUW, LKLW, CRYPT).
//
//   R  | op:6 | rs:5 | rt:5 | rd:5 | shamt:5 | funct:6 |
//   I  | op:6 | rs:5 | rt:5 |        immediate:16      |
//   J  | op:6 |              target:26                 |

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "mipscrypt/error.hpp"

namespace mipscrypt::isa {

enum class Format : std::uint8_t { R, I, J };

// Instruction class used for retirement counts and per-class latencies. It
// differs from the encoding for SLL/SRL (I class, R encoding) and JR (J class,
// R encoding).
enum class InstrClass : std::uint8_t { R, I, J, None };

enum class Op : std::uint8_t {
  Add, Sub, And, Or, Nor, Slt,
  Addi, Subi, Slti, Ori, Andi, Nori,
  Sll, Srl,
  Beq, Bne,
  Jr, Jal, J, Crypt,
  Lw, Sw, Lkuw, Lklw,
  Nop,
};

inline constexpr std::size_t kMnemonicCount = 24;  // Nop is not counted

struct Mnemonic {
  Op op;
  std::string_view name;
  Format format;  // encoding
  InstrClass cls;
  std::uint8_t opcode;
  std::optional<std::uint8_t> funct;  // R-encoded only
  int base_cycles;
};

inline constexpr std::array<Mnemonic, kMnemonicCount + 1> kMnemonics{{
    {Op::Add, "add", Format::R, InstrClass::R, 0, 0x20, 4},
    {Op::Sub, "sub", Format::R, InstrClass::R, 0, 0x22, 4},
    {Op::And, "and", Format::R, InstrClass::R, 0, 0x24, 4},
    {Op::Or, "or", Format::R, InstrClass::R, 0, 0x25, 4},
    {Op::Nor, "nor", Format::R, InstrClass::R, 0, 0x27, 4},
    {Op::Slt, "slt", Format::R, InstrClass::R, 0, 0x2A, 4},
    {Op::Addi, "addi", Format::I, InstrClass::I, 0b001000, std::nullopt, 4},
    {Op::Subi, "subi", Format::I, InstrClass::I, 0b011000, std::nullopt, 4},
    {Op::Slti, "slti", Format::I, InstrClass::I, 0b001010, std::nullopt, 4},
    {Op::Ori, "ori", Format::I, InstrClass::I, 0b001101, std::nullopt, 4},
    {Op::Andi, "andi", Format::I, InstrClass::I, 0b001100, std::nullopt, 4},
    {Op::Nori, "nori", Format::I, InstrClass::I, 0b011001, std::nullopt, 4},
    {Op::Sll, "sll", Format::R, InstrClass::I, 0, 0b000000, 4},
    {Op::Srl, "srl", Format::R, InstrClass::I, 0, 0b000010, 4},
    {Op::Beq, "beq", Format::I, InstrClass::I, 0b000100, std::nullopt, 3},
    {Op::Bne, "bne", Format::I, InstrClass::I, 0b000101, std::nullopt, 3},
    {Op::Jr, "jr", Format::R, InstrClass::J, 0, 0b001000, 3},
    {Op::Jal, "jal", Format::J, InstrClass::J, 0b000011, std::nullopt, 3},
    {Op::J, "j", Format::J, InstrClass::J, 0b000010, std::nullopt, 3},
    {Op::Crypt, "crypt", Format::J, InstrClass::J, 0b111111, std::nullopt, 3},
    {Op::Lw, "lw", Format::I, InstrClass::I, 0b100011, std::nullopt, 5},
    {Op::Sw, "sw", Format::I, InstrClass::I, 0b101011, std::nullopt, 4},
    {Op::Lkuw, "lkuw", Format::I, InstrClass::I, 0b111110, std::nullopt, 5},
    {Op::Lklw, "lklw", Format::I, InstrClass::I, 0b111100, std::nullopt, 5},
    {Op::Nop, "nop", Format::R, InstrClass::None, 0, 0, 4},
}};

constexpr const Mnemonic& mnemonic(Op op) { return kMnemonics[static_cast<std::size_t>(op)]; }

inline std::optional<Op> find_mnemonic(std::string_view name) {
  for (const auto& m : kMnemonics)
    if (m.name == name) return m.op;
  return std::nullopt;
}

struct Instruction {
  Op op = Op::Nop;
  Format format = Format::R;
  std::uint8_t opcode = 0;
  std::uint8_t rs = 0;
  std::uint8_t rt = 0;
  std::uint8_t rd = 0;
  std::uint8_t shamt = 0;
  std::uint8_t funct = 0;
  std::int16_t immediate = 0;
  std::uint32_t target = 0;

  friend bool operator==(const Instruction&, const Instruction&) = default;

  const Mnemonic& info() const { return mnemonic(op); }
};

// --- constructors --------------------------------------------------------

inline Instruction make_nop() { return {}; }

// add/sub/and/or/nor/slt rd, rs, rt
inline Instruction make_r(Op op, unsigned rd, unsigned rs, unsigned rt) {
  const auto& m = mnemonic(op);
  Instruction i;
  i.op = op;
  i.format = Format::R;
  i.opcode = m.opcode;
  i.funct = m.funct.value_or(0);
  i.rd = static_cast<std::uint8_t>(rd);
  i.rs = static_cast<std::uint8_t>(rs);
  i.rt = static_cast<std::uint8_t>(rt);
  return i;
}

// sll/srl rd, rt, shamt
inline Instruction make_shift(Op op, unsigned rd, unsigned rt, unsigned shamt) {
  Instruction i = make_r(op, rd, 0, rt);
  i.shamt = static_cast<std::uint8_t>(shamt);
  return i;
}

inline Instruction make_jr(unsigned rs) { return make_r(Op::Jr, 0, rs, 0); }

// I format: ALU immediates, branches and memory operations.
inline Instruction make_i(Op op, unsigned rt, unsigned rs, std::int16_t imm) {
  const auto& m = mnemonic(op);
  Instruction i;
  i.op = op;
  i.format = Format::I;
  i.opcode = m.opcode;
  i.rt = static_cast<std::uint8_t>(rt);
  i.rs = static_cast<std::uint8_t>(rs);
  i.immediate = imm;
  return i;
}

inline Instruction make_j(Op op, std::uint32_t target) {
  const auto& m = mnemonic(op);
  Instruction i;
  i.op = op;
  i.format = Format::J;
  i.opcode = m.opcode;
  i.target = target;
  return i;
}

// --- encode / decode -----------------------------------------------------

inline std::uint32_t encode(const Instruction& in) {
  auto check = [](const char* field, std::uint32_t v, unsigned bits) {
    if (v >= (1u << bits)) throw EncodeError(field, v);
  };
  check("opcode", in.opcode, 6);
  std::uint32_t w = std::uint32_t{in.opcode} << 26;
  switch (in.format) {
    case Format::R:
      check("rs", in.rs, 5);
      check("rt", in.rt, 5);
      check("rd", in.rd, 5);
      check("shamt", in.shamt, 5);
      check("funct", in.funct, 6);
      return w | std::uint32_t{in.rs} << 21 | std::uint32_t{in.rt} << 16 |
             std::uint32_t{in.rd} << 11 | std::uint32_t{in.shamt} << 6 | in.funct;
    case Format::I:
      check("rs", in.rs, 5);
      check("rt", in.rt, 5);
      return w | std::uint32_t{in.rs} << 21 | std::uint32_t{in.rt} << 16 |
             static_cast<std::uint16_t>(in.immediate);
    case Format::J:
      check("target", in.target, 26);
      return w | in.target;
  }
  return w;
}

// Strict decoder: fields that the operation does not use must be zero, so
// every accepted word re-encodes to itself.
inline Instruction decode(std::uint32_t word, std::optional<std::uint32_t> pc = {}) {
  if (word == 0) return make_nop();
  const auto opcode = static_cast<std::uint8_t>(word >> 26);
  const auto rs = static_cast<std::uint8_t>((word >> 21) & 0x1F);
  const auto rt = static_cast<std::uint8_t>((word >> 16) & 0x1F);
  const auto rd = static_cast<std::uint8_t>((word >> 11) & 0x1F);
  const auto shamt = static_cast<std::uint8_t>((word >> 6) & 0x1F);
  const auto funct = static_cast<std::uint8_t>(word & 0x3F);

  if (opcode == 0) {
    for (const auto& m : kMnemonics) {
      if (m.op == Op::Nop || m.format != Format::R || m.funct != funct) continue;
      Instruction i;
      i.op = m.op;
      i.format = Format::R;
      i.rs = rs;
      i.rt = rt;
      i.rd = rd;
      i.shamt = shamt;
      i.funct = funct;
      bool ok = true;
      if (m.op == Op::Sll || m.op == Op::Srl)
        ok = rs == 0;
      else if (m.op == Op::Jr)
        ok = rt == 0 && rd == 0 && shamt == 0;
      else
        ok = shamt == 0;
      if (!ok) break;
      return i;
    }
    throw DecodeError(word, pc);
  }
  for (const auto& m : kMnemonics) {
    if (m.format == Format::R || m.opcode != opcode) continue;
    Instruction i;
    i.op = m.op;
    i.format = m.format;
    i.opcode = opcode;
    if (m.format == Format::I) {
      i.rs = rs;
      i.rt = rt;
      i.immediate = static_cast<std::int16_t>(word & 0xFFFF);
    } else {
      i.target = word & 0x03FFFFFF;
    }
    return i;
  }
  throw DecodeError(word, pc);
}

// --- operand roles ---------------------------------------------------------

constexpr bool reads_rs(Op op) {
  switch (op) {
    case Op::Sll: case Op::Srl: case Op::J: case Op::Jal: case Op::Crypt: case Op::Nop:
      return false;
    default:
      return true;
  }
}

constexpr bool reads_rt(Op op) {
  switch (op) {
    case Op::Add: case Op::Sub: case Op::And: case Op::Or: case Op::Nor: case Op::Slt:
    case Op::Sll: case Op::Srl: case Op::Beq: case Op::Bne: case Op::Sw:
      return true;
    default:
      return false;
  }
}

// Register written back, if any. Writes to $0 are reported as 0 and dropped
// by the register file.
inline std::optional<unsigned> dest_reg(const Instruction& i) {
  switch (i.op) {
    case Op::Add: case Op::Sub: case Op::And: case Op::Or: case Op::Nor: case Op::Slt:
    case Op::Sll: case Op::Srl:
      return i.rd;
    case Op::Addi: case Op::Subi: case Op::Slti: case Op::Ori: case Op::Andi: case Op::Nori:
    case Op::Lw:
      return i.rt;
    case Op::Jal:
      return 31u;
    default:
      return std::nullopt;
  }
}

constexpr bool is_branch(Op op) { return op == Op::Beq || op == Op::Bne; }
constexpr bool is_jump(Op op) { return op == Op::J || op == Op::Jal || op == Op::Jr; }
constexpr bool is_key_load(Op op) { return op == Op::Lkuw || op == Op::Lklw; }
constexpr bool is_load(Op op) { return op == Op::Lw || is_key_load(op); }
constexpr bool accesses_memory(Op op) { return is_load(op) || op == Op::Sw; }
constexpr bool zero_extends(Op op) { return op == Op::Ori || op == Op::Andi || op == Op::Nori; }

// Key-register slot addressed by LKLW (pair 0/1) or LKUW (pair 2/3); the low
// bit of rt picks the word within the pair.
constexpr unsigned key_slot(const Instruction& i) {
  return (i.op == Op::Lklw ? 0u : 2u) + (i.rt & 1u);
}

constexpr bool crypt_argument(const Instruction& i) { return i.target != 0; }

}  // namespace mipscrypt::isa
