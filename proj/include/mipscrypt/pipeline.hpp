#pragma once

// Five-stage cycle-stepped pipeline (IF, ID, EX, MEM, WB) with forwarding,
// load-use stalls, predict-not-taken branches resolved in ID, fetch-path
// decryption, block-cipher memory paths and EX/MEM clock gating.
//
// Stages are evaluated WB, MEM, EX, ID, IF inside one step, each reading the
// latch contents from the start of the cycle, so a register written in WB is
// visible to the ID read of the same cycle.

#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mipscrypt/activity.hpp"
#include "mipscrypt/cipher.hpp"
#include "mipscrypt/error.hpp"
#include "mipscrypt/isa.hpp"
#include "mipscrypt/machine.hpp"

namespace mipscrypt {

constexpr unsigned default_crypto_cycles(CipherKind k) { return k == CipherKind::Aes ? 43 : 16; }

struct PipelineConfig {
  CipherKind cipher = CipherKind::Des;
  unsigned crypto_block_cycles = 16;
  bool gating_enabled = false;
  // The whole instruction image is stored encrypted; every fetch goes
  // through the decryption core.
  bool decrypt_ifetch = false;
  // Charge crypto_block_cycles on every fetch through the cipher path. When
  // false, only the first fetch from each cipher block is charged.
  bool per_instruction_crypto_charge = true;

  static PipelineConfig for_cipher(CipherKind k) {
    PipelineConfig c;
    c.cipher = k;
    c.crypto_block_cycles = default_crypto_cycles(k);
    return c;
  }

  void validate() const {
    if (crypto_block_cycles < 1) throw Error("crypto_block_cycles must be >= 1");
  }
};

struct Control {
  bool reg_write = false;
  bool mem_read = false;
  bool mem_write = false;
  bool branch = false;
  bool jump = false;
  bool crypt_toggle = false;
  bool key_write = false;
  std::uint8_t key_slot = 0;

  std::uint32_t pack() const {
    return std::uint32_t{reg_write} | std::uint32_t{mem_read} << 1 | std::uint32_t{mem_write} << 2 |
           std::uint32_t{branch} << 3 | std::uint32_t{jump} << 4 | std::uint32_t{crypt_toggle} << 5 |
           std::uint32_t{key_write} << 6 | std::uint32_t{key_slot} << 7;
  }

  static Control for_instruction(const isa::Instruction& in) {
    using isa::Op;
    Control c;
    c.reg_write = isa::dest_reg(in).has_value();
    c.mem_read = isa::is_load(in.op);
    c.mem_write = in.op == Op::Sw;
    c.branch = isa::is_branch(in.op);
    c.jump = isa::is_jump(in.op);
    c.crypt_toggle = in.op == Op::Crypt;
    c.key_write = isa::is_key_load(in.op);
    c.key_slot = c.key_write ? static_cast<std::uint8_t>(isa::key_slot(in)) : 0;
    return c;
  }
};

// One pipeline register. Field use by position:
//   IF/ID   pc, word
//   ID/EX   a, b = operand values read in ID; src_* = their registers
//   EX/MEM  a = ALU result / address / link value, b = store data
//   MEM/WB  a = value to write back
struct StageLatch {
  bool valid = false;
  std::uint32_t pc = 0;
  std::uint32_t word = 0;
  isa::Instruction instr;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  int src_a = -1;
  int src_b = -1;
  std::uint8_t dest = 0;
  Control ctrl;
  bool bypass_mem = false;  // EX/MEM held at zero for this instruction
  std::uint64_t fetch_cycle = 0;
  std::uint64_t complete_cycle = 0;
};

// --- hazard logic ---------------------------------------------------------

// Newest in-flight value for `reg`: EX/MEM over MEM/WB over `fallback` (the
// register-file read). A load in EX/MEM has no value yet; the hazard unit
// never lets a consumer reach that case.
inline std::uint32_t forward(unsigned reg, std::uint32_t fallback, const StageLatch& ex_mem,
                             const StageLatch& mem_wb) {
  if (reg == 0) return 0;
  if (ex_mem.valid && ex_mem.ctrl.reg_write && ex_mem.dest == reg) {
    if (ex_mem.ctrl.mem_read) throw std::logic_error("forward from a load still in MEM");
    return ex_mem.a;
  }
  if (mem_wb.valid && mem_wb.ctrl.reg_write && mem_wb.dest == reg) return mem_wb.a;
  return fallback;
}

namespace detail {
inline bool writes_source(const StageLatch& l, const isa::Instruction& in) {
  if (!l.valid || !l.ctrl.reg_write || l.dest == 0) return false;
  return (isa::reads_rs(in.op) && in.rs == l.dest) || (isa::reads_rt(in.op) && in.rt == l.dest);
}
inline bool resolves_in_id(isa::Op op) { return isa::is_branch(op) || op == isa::Op::Jr; }
}  // namespace detail

// Stall IF and ID for this cycle when:
//  - ID/EX holds a load whose destination is an ID source (load-use), or
//  - ID holds a branch/JR, which compares operands in ID, and the producer is
//    still in EX, or is a load still in MEM.
inline bool hazard_detect(const isa::Instruction& id, const StageLatch& id_ex, const StageLatch& ex_mem) {
  if (id_ex.ctrl.mem_read && detail::writes_source(id_ex, id)) return true;
  if (detail::resolves_in_id(id.op)) {
    if (detail::writes_source(id_ex, id)) return true;
    if (ex_mem.ctrl.mem_read && detail::writes_source(ex_mem, id)) return true;
  }
  return false;
}

struct BranchDecision {
  bool taken = false;
  std::uint32_t target = 0;
  bool halt = false;  // J to its own address
};

// Control transfer decided in ID; a, b are the forwarded rs/rt values.
inline BranchDecision resolve_branch(const isa::Instruction& in, std::uint32_t pc, std::uint32_t a,
                                     std::uint32_t b) {
  using isa::Op;
  BranchDecision d;
  switch (in.op) {
    case Op::Beq:
    case Op::Bne:
      d.taken = (in.op == Op::Beq) == (a == b);
      d.target = pc + 4 + static_cast<std::uint32_t>(std::int32_t{in.immediate} * 4);
      break;
    case Op::J:
    case Op::Jal:
      d.taken = true;
      d.target = in.target << 2;
      d.halt = in.op == Op::J && d.target == pc;
      break;
    case Op::Jr:
      d.taken = true;
      d.target = a;
      break;
    default:
      break;
  }
  return d;
}

inline std::uint32_t alu(const isa::Instruction& in, std::uint32_t pc, std::uint32_t a, std::uint32_t b) {
  using isa::Op;
  const auto simm = static_cast<std::uint32_t>(std::int32_t{in.immediate});
  const auto zimm = std::uint32_t{static_cast<std::uint16_t>(in.immediate)};
  switch (in.op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::And: return a & b;
    case Op::Or: return a | b;
    case Op::Nor: return ~(a | b);
    case Op::Slt: return static_cast<std::int32_t>(a) < static_cast<std::int32_t>(b) ? 1u : 0u;
    case Op::Addi: return a + simm;
    case Op::Subi: return a - simm;
    case Op::Slti: return static_cast<std::int32_t>(a) < static_cast<std::int32_t>(simm) ? 1u : 0u;
    case Op::Ori: return a | zimm;
    case Op::Andi: return a & zimm;
    case Op::Nori: return ~(a | zimm);
    case Op::Sll: return b << in.shamt;
    case Op::Srl: return b >> in.shamt;
    case Op::Lw: case Op::Sw: case Op::Lkuw: case Op::Lklw: return a + simm;
    case Op::Jal: return pc + 4;
    default: return 0;
  }
}

// --- trace ----------------------------------------------------------------

struct CycleRecord {
  std::uint64_t cycle = 0;
  std::array<std::string, 5> stages;  // IF ID EX MEM WB; "-" is a bubble
  bool stall = false;
  bool flush = false;
  bool crypt = false;
  bool gated = false;
  std::uint64_t toggles = 0;
};

struct RetireRecord {
  std::uint32_t pc = 0;
  std::uint32_t word = 0;  // decrypted instruction word
  isa::Op op = isa::Op::Nop;
  std::uint64_t fetch_cycle = 0;
  std::uint64_t complete_cycle = 0;
  std::uint64_t retire_cycle = 0;

  isa::InstrClass cls() const { return isa::mnemonic(op).cls; }
  // First IF cycle through the stage that finishes the instruction's work
  // (EX for control transfers, MEM for ALU ops and stores, WB for loads).
  std::uint64_t latency() const { return complete_cycle - fetch_cycle + 1; }
};

struct ArchEvent {
  enum class Kind : std::uint8_t { RegWrite, Store, KeyWrite, Crypt };
  Kind kind;
  std::uint32_t index;  // register, byte address, key slot; unused for Crypt
  std::uint32_t value;
  friend bool operator==(const ArchEvent&, const ArchEvent&) = default;
};

enum class RunStatus : std::uint8_t { Running, Halted, CycleCap };
enum class HaltReason : std::uint8_t { None, SelfJump, EndOfProgram };

struct RunTrace {
  PipelineConfig config;
  std::vector<CycleRecord> cycles;
  std::vector<RetireRecord> retired;
  std::vector<ArchEvent> events;
  ActivityCounters activity;
  RunStatus status = RunStatus::Running;
  HaltReason halt_reason = HaltReason::None;
  std::uint64_t cycle_count = 0;
  std::uint64_t stall_cycles = 0;
  std::uint64_t flushes = 0;
  std::array<std::uint64_t, 3> retired_by_class{};  // R, I, J

  std::uint64_t retired_count() const { return retired_by_class[0] + retired_by_class[1] + retired_by_class[2]; }

  // Largest measured latency among retired instructions of a class, 0 when
  // none retired.
  std::uint64_t class_latency(isa::InstrClass cls) const {
    std::uint64_t best = 0;
    for (const auto& r : retired)
      if (r.cls() == cls) best = std::max(best, r.latency());
    return best;
  }
};

// One line per cycle:
//   <cycle> IF=<..> ID=<..> EX=<..> MEM=<..> WB=<..> stall=<0|1> flush=<0|1> crypt=<0|1> toggles=<n>
inline std::string to_text(const CycleRecord& r) {
  static constexpr const char* kNames[5] = {"IF", "ID", "EX", "MEM", "WB"};
  std::ostringstream out;
  out << r.cycle;
  for (int s = 0; s < 5; ++s) out << ' ' << kNames[s] << '=' << r.stages[s];
  out << " stall=" << r.stall << " flush=" << r.flush << " crypt=" << r.crypt << " toggles=" << r.toggles;
  return out.str();
}

inline std::string to_text(const RunTrace& t) {
  std::string s;
  for (const auto& r : t.cycles) s += to_text(r) + '\n';
  return s;
}

// --- pipeline ---------------------------------------------------------------

class Pipeline {
 public:
  Pipeline(MachineState machine, PipelineConfig cfg) : m_(std::move(machine)), cfg_(cfg) {
    cfg_.validate();
    if (m_.mode() != Mode::Running) throw ProtocolError("pipeline requires a started machine");
    if (cfg_.cipher != m_.cipher()) throw Error("pipeline and machine disagree on the cipher");
    trace_.config = cfg_;
    update_halted();
  }

  const MachineState& machine() const { return m_; }
  const PipelineConfig& config() const { return cfg_; }
  bool halted() const { return halted_; }
  std::uint64_t cycle_count() const { return cycle_; }
  const RunTrace& trace() const { return trace_; }
  const StageLatch& if_id() const { return if_id_; }
  const StageLatch& id_ex() const { return id_ex_; }
  const StageLatch& ex_mem() const { return ex_mem_; }
  const StageLatch& mem_wb() const { return mem_wb_; }

  void step() {
    if (halted_) throw ProtocolError("pipeline already halted");
    const std::uint64_t c = cycle_ + 1;
    CycleRecord rec;
    rec.cycle = c;
    rec.stages = {"-", name(if_id_), name(id_ex_), name(ex_mem_), name(mem_wb_)};
    const bool if_busy = fetch_.active || can_fetch();
    StageLatch next_if_id, next_id_ex, next_ex_mem, next_mem_wb;

    write_back(c);
    if (ex_mem_.valid) next_mem_wb = memory_access(ex_mem_, c);
    if (id_ex_.valid) next_ex_mem = execute(id_ex_, c);

    bool stall = false;
    std::optional<BranchDecision> transfer;
    if (if_id_.valid) {
      isa::Instruction in;
      try {
        in = isa::decode(if_id_.word, if_id_.pc);
      } catch (const DecodeError& e) {
        throw SimulationFault(if_id_.pc, c, e.what(), true);
      }
      if (hazard_detect(in, id_ex_, ex_mem_)) {
        stall = true;
      } else {
        next_id_ex = decode_stage(in, transfer, c);
      }
    }

    if (transfer && transfer->taken) {
      // The one younger instruction in IF is squashed.
      fetch_ = {};
      ++trace_.flushes;
      if (transfer->halt) {
        halt_fetch_ = true;
      } else {
        if (transfer->target % 4) throw SimulationFault(if_id_.pc, c, "misaligned jump target");
        m_.pc = transfer->target;
      }
      if (if_busy) rec.stages[0] = "x";
    } else if (stall) {
      next_if_id = if_id_;
      ++trace_.stall_cycles;
      if (fetch_.active) rec.stages[0] = fetch_label(m_.pc);
    } else {
      next_if_id = fetch_stage(rec, c);
    }

    const bool gated = next_ex_mem.valid && next_ex_mem.bypass_mem;
    LatchImages next_images = images(next_if_id, next_id_ex, next_ex_mem, next_mem_wb);
    const auto before = trace_.activity.total_toggles();
    trace_.activity = record_cycle(trace_.activity, images_, next_images, gated);
    if (gated) next_images[kExMem].fill(0);
    images_ = next_images;

    if_id_ = next_if_id;
    id_ex_ = next_id_ex;
    ex_mem_ = next_ex_mem;
    mem_wb_ = next_mem_wb;
    cycle_ = c;

    rec.stall = stall;
    rec.flush = transfer && transfer->taken;
    rec.crypt = m_.crypt_enabled;
    rec.gated = gated;
    rec.toggles = trace_.activity.total_toggles() - before;
    trace_.cycles.push_back(std::move(rec));
    trace_.cycle_count = cycle_;
    update_halted();
  }

  RunTrace run(std::uint64_t max_cycles) {
    while (!halted_ && cycle_ < max_cycles) step();
    trace_.status = halted_ ? RunStatus::Halted : RunStatus::CycleCap;
    return trace_;
  }

 private:
  static std::string name(const StageLatch& l) {
    if (!l.valid) return "-";
    try {
      return std::string(isa::decode(l.word).info().name);
    } catch (const DecodeError&) {
      return "?";
    }
  }

  static std::string fetch_label(std::uint32_t pc) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "@%04x", pc);
    return buf;
  }

  bool can_fetch() const {
    return !halt_fetch_ && m_.pc >= m_.image_base() && m_.pc < m_.image_end();
  }

  void update_halted() {
    if (if_id_.valid || id_ex_.valid || ex_mem_.valid || mem_wb_.valid || fetch_.active) return;
    if (halt_fetch_ || !can_fetch()) {
      halted_ = true;
      trace_.halt_reason = halt_fetch_ ? HaltReason::SelfJump : HaltReason::EndOfProgram;
      trace_.status = RunStatus::Halted;
    }
  }

  void mark_complete(StageLatch& l, int stage_number, std::uint64_t c) const {
    if (l.instr.info().base_cycles == stage_number) l.complete_cycle = c;
  }

  void write_back(std::uint64_t c) {
    StageLatch& w = mem_wb_;
    if (!w.valid) return;
    mark_complete(w, 5, c);
    if (w.ctrl.reg_write && w.dest != 0) {
      m_.rf.write(w.dest, w.a);
      trace_.events.push_back({ArchEvent::Kind::RegWrite, w.dest, w.a});
    }
    if (w.ctrl.key_write) {
      m_.load_key_word(w.ctrl.key_slot, w.a);
      trace_.events.push_back({ArchEvent::Kind::KeyWrite, w.ctrl.key_slot, w.a});
    }
    if (w.ctrl.crypt_toggle) {
      m_.crypt_enabled = isa::crypt_argument(w.instr);
      trace_.events.push_back({ArchEvent::Kind::Crypt, 0, m_.crypt_enabled ? 1u : 0u});
    }
    RetireRecord r{w.pc, w.word, w.instr.op, w.fetch_cycle, w.complete_cycle, c};
    const auto cls = r.cls();
    if (cls != isa::InstrClass::None) ++trace_.retired_by_class[static_cast<std::size_t>(cls)];
    trace_.retired.push_back(r);
  }

  StageLatch memory_access(StageLatch x, std::uint64_t c) {
    using isa::Op;
    try {
      switch (x.instr.op) {
        case Op::Lw:
          x.a = m_.encrypted_load_word(x.a);
          break;
        case Op::Lkuw:
        case Op::Lklw:
          // Key material bypasses the decryption core.
          x.a = m_.dmem().read_word(x.a);
          break;
        case Op::Sw:
          m_.encrypted_store_word(x.a, x.b);
          trace_.events.push_back({ArchEvent::Kind::Store, x.a, x.b});
          break;
        default:
          break;
      }
    } catch (const MemoryFault& e) {
      throw SimulationFault(x.pc, c, e.what());
    }
    mark_complete(x, 4, c);
    return x;
  }

  StageLatch execute(StageLatch x, std::uint64_t c) const {
    const std::uint32_t a = x.src_a >= 0 ? forward(static_cast<unsigned>(x.src_a), x.a, ex_mem_, mem_wb_) : x.a;
    const std::uint32_t b = x.src_b >= 0 ? forward(static_cast<unsigned>(x.src_b), x.b, ex_mem_, mem_wb_) : x.b;
    x.a = alu(x.instr, x.pc, a, b);
    x.b = b;
    mark_complete(x, 3, c);
    return x;
  }

  StageLatch decode_stage(const isa::Instruction& in, std::optional<BranchDecision>& transfer, std::uint64_t c) {
    using isa::Op;
    StageLatch d;
    d.valid = true;
    d.pc = if_id_.pc;
    d.word = if_id_.word;
    d.fetch_cycle = if_id_.fetch_cycle;
    d.instr = in;
    d.ctrl = Control::for_instruction(in);
    d.dest = static_cast<std::uint8_t>(isa::dest_reg(in).value_or(0));
    if (isa::reads_rs(in.op)) {
      d.src_a = in.rs;
      d.a = m_.rf.read(in.rs);
    }
    if (isa::reads_rt(in.op)) {
      d.src_b = in.rt;
      d.b = m_.rf.read(in.rt);
    }
    if (d.ctrl.branch || d.ctrl.jump) {
      const std::uint32_t a = forward(in.rs, d.a, ex_mem_, mem_wb_);
      const std::uint32_t b = d.src_b >= 0 ? forward(in.rt, d.b, ex_mem_, mem_wb_) : 0;
      transfer = resolve_branch(in, d.pc, a, b);
    }
    // Control-unit gating mode: raised by a store/branch/jump, dropped by a
    // load. While raised, instructions that do not touch memory skip EX/MEM.
    if (in.op == Op::Sw || d.ctrl.branch || d.ctrl.jump || d.ctrl.crypt_toggle)
      gate_mode_ = true;
    else if (isa::is_load(in.op))
      gate_mode_ = false;
    d.bypass_mem = cfg_.gating_enabled && gate_mode_ && !isa::accesses_memory(in.op);
    mark_complete(d, 2, c);
    return d;
  }

  unsigned fetch_charge(std::uint32_t pc) {
    if (!(m_.crypt_enabled || cfg_.decrypt_ifetch)) return 0;
    if (cfg_.per_instruction_crypto_charge) return cfg_.crypto_block_cycles;
    const std::uint32_t block = pc / static_cast<std::uint32_t>(block_bytes(cfg_.cipher));
    if (cached_block_ == block) return 0;
    cached_block_ = block;
    return cfg_.crypto_block_cycles;
  }

  StageLatch fetch_stage(CycleRecord& rec, std::uint64_t c) {
    if (!fetch_.active && can_fetch()) {
      fetch_.active = true;
      fetch_.remaining = fetch_charge(m_.pc);
      fetch_.start = c;
    }
    if (!fetch_.active) return {};
    rec.stages[0] = fetch_label(m_.pc);
    if (fetch_.remaining > 0) {
      --fetch_.remaining;
      return {};
    }
    StageLatch f;
    f.valid = true;
    f.pc = m_.pc;
    try {
      f.word = m_.fetch_word(m_.pc, cfg_.decrypt_ifetch);
    } catch (const MemoryFault& e) {
      throw SimulationFault(m_.pc, c, e.what());
    }
    f.fetch_cycle = fetch_.start;
    m_.pc += 4;
    fetch_ = {};
    return f;
  }

  LatchImages images(const StageLatch& if_id, const StageLatch& id_ex, const StageLatch& ex_mem,
                     const StageLatch& mem_wb) const {
    LatchImages im{};
    auto ctrl = [](const StageLatch& l) { return std::uint32_t{l.dest} | l.ctrl.pack() << 5; };
    if (if_id.valid) im[kIfId] = {if_id.pc, if_id.word};
    if (id_ex.valid)
      im[kIdEx] = {id_ex.pc, id_ex.word, id_ex.a, id_ex.b,
                   static_cast<std::uint32_t>(std::int32_t{id_ex.instr.immediate}), ctrl(id_ex)};
    if (ex_mem.valid) im[kExMem] = {ex_mem.a, ex_mem.b, ctrl(ex_mem)};
    if (mem_wb.valid) im[kMemWb] = {mem_wb.a, ctrl(mem_wb)};
    return im;
  }

  struct FetchUnit {
    bool active = false;
    unsigned remaining = 0;
    std::uint64_t start = 0;
  };

  MachineState m_;
  PipelineConfig cfg_;
  StageLatch if_id_, id_ex_, ex_mem_, mem_wb_;
  LatchImages images_{};
  FetchUnit fetch_;
  std::optional<std::uint32_t> cached_block_;
  bool gate_mode_ = false;
  bool halt_fetch_ = false;
  bool halted_ = false;
  std::uint64_t cycle_ = 0;
  RunTrace trace_;
};

// Convenience: reset-load an image, start, and wrap in a pipeline.
struct LoadSpec {
  std::vector<std::uint32_t> image;
  std::vector<std::uint8_t> dmem_init;
  std::optional<KeyWords> keys;
  std::size_t imem_bytes = kDefaultMemoryBytes;
  std::size_t dmem_bytes = kDefaultMemoryBytes;
};

inline Pipeline make_pipeline(const LoadSpec& spec, const PipelineConfig& cfg) {
  MachineState m({cfg.cipher, spec.imem_bytes, spec.dmem_bytes});
  m.reset_load(spec.image, spec.dmem_init, 0, spec.keys);
  m.start();
  return Pipeline(std::move(m), cfg);
}

}  // namespace mipscrypt
