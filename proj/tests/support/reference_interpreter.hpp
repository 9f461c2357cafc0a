#pragma once

// One-instruction-at-a-time interpreter over the same isa/machine modules.
// Test-only oracle for the pipeline: it shares decode and the memory/cipher
// paths but has its own execute logic and no notion of stages.

#include <cstdint>
#include <vector>

#include "mipscrypt/mipscrypt.hpp"

namespace oracle {

struct RefResult {
  mipscrypt::MachineState state;
  std::vector<mipscrypt::ArchEvent> events;
  std::vector<std::uint32_t> retired_pcs;
  mipscrypt::HaltReason halt = mipscrypt::HaltReason::None;
};

inline RefResult interpret(const mipscrypt::LoadSpec& spec, mipscrypt::CipherKind cipher, bool decrypt_ifetch,
                           std::size_t max_steps = 200'000) {
  using namespace mipscrypt;
  using isa::Op;
  using Ev = ArchEvent::Kind;
  RefResult out{MachineState({cipher, spec.imem_bytes, spec.dmem_bytes}), {}, {}, HaltReason::None};
  MachineState& m = out.state;
  m.reset_load(spec.image, spec.dmem_init, 0, spec.keys);
  m.start();

  auto setreg = [&](unsigned r, std::uint32_t v) {
    if (r == 0) return;
    m.rf.write(r, v);
    out.events.push_back({Ev::RegWrite, r, v});
  };

  for (std::size_t step = 0; step < max_steps; ++step) {
    if (m.pc < m.image_base() || m.pc >= m.image_end()) {
      out.halt = HaltReason::EndOfProgram;
      return out;
    }
    const std::uint32_t pc = m.pc;
    const isa::Instruction in = isa::decode(m.fetch_word(pc, decrypt_ifetch), pc);
    out.retired_pcs.push_back(pc);
    const std::uint32_t rs = m.rf.read(in.rs), rt = m.rf.read(in.rt);
    const std::int32_t simm = in.immediate;
    const std::uint32_t zimm = static_cast<std::uint16_t>(in.immediate);
    std::uint32_t next = pc + 4;
    switch (in.op) {
      case Op::Nop: break;
      case Op::Add: setreg(in.rd, rs + rt); break;
      case Op::Sub: setreg(in.rd, rs - rt); break;
      case Op::And: setreg(in.rd, rs & rt); break;
      case Op::Or: setreg(in.rd, rs | rt); break;
      case Op::Nor: setreg(in.rd, ~(rs | rt)); break;
      case Op::Slt: setreg(in.rd, static_cast<std::int32_t>(rs) < static_cast<std::int32_t>(rt)); break;
      case Op::Addi: setreg(in.rt, rs + static_cast<std::uint32_t>(simm)); break;
      case Op::Subi: setreg(in.rt, rs - static_cast<std::uint32_t>(simm)); break;
      case Op::Slti: setreg(in.rt, static_cast<std::int32_t>(rs) < simm); break;
      case Op::Ori: setreg(in.rt, rs | zimm); break;
      case Op::Andi: setreg(in.rt, rs & zimm); break;
      case Op::Nori: setreg(in.rt, ~(rs | zimm)); break;
      case Op::Sll: setreg(in.rd, rt << in.shamt); break;
      case Op::Srl: setreg(in.rd, rt >> in.shamt); break;
      case Op::Beq: if (rs == rt) next = pc + 4 + static_cast<std::uint32_t>(simm * 4); break;
      case Op::Bne: if (rs != rt) next = pc + 4 + static_cast<std::uint32_t>(simm * 4); break;
      case Op::J:
        next = in.target * 4;
        if (next == pc) {
          out.halt = HaltReason::SelfJump;
          return out;
        }
        break;
      case Op::Jal: setreg(31, pc + 4); next = in.target * 4; break;
      case Op::Jr: next = rs; break;
      case Op::Crypt:
        m.crypt_enabled = in.target != 0;
        out.events.push_back({Ev::Crypt, 0, m.crypt_enabled ? 1u : 0u});
        break;
      case Op::Lw: setreg(in.rt, m.encrypted_load_word(rs + static_cast<std::uint32_t>(simm))); break;
      case Op::Sw: {
        const std::uint32_t addr = rs + static_cast<std::uint32_t>(simm);
        m.encrypted_store_word(addr, rt);
        out.events.push_back({Ev::Store, addr, rt});
        break;
      }
      case Op::Lkuw:
      case Op::Lklw: {
        const unsigned slot = (in.op == Op::Lklw ? 0u : 2u) + (in.rt & 1u);
        const std::uint32_t v = m.dmem().read_word(rs + static_cast<std::uint32_t>(simm));
        m.load_key_word(slot, v);
        out.events.push_back({Ev::KeyWrite, slot, v});
        break;
      }
    }
    m.pc = next;
  }
  return out;
}

}  // namespace oracle
