#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>

namespace mipscrypt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A field of an Instruction does not fit its bit slot.
class EncodeError : public Error {
 public:
  EncodeError(std::string field, std::uint32_t value)
      : Error("field '" + field + "' out of range: " + std::to_string(value)),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A 32-bit word that is not part of the implemented instruction subset.
class DecodeError : public Error {
 public:
  explicit DecodeError(std::uint32_t word, std::optional<std::uint32_t> pc = {})
      : Error(message(word, pc)), word_(word), pc_(pc) {}
  std::uint32_t word() const noexcept { return word_; }
  std::optional<std::uint32_t> pc() const noexcept { return pc_; }

 private:
  static std::string message(std::uint32_t word, std::optional<std::uint32_t> pc) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "illegal instruction 0x%08x", word);
    std::string s = buf;
    if (pc) {
      std::snprintf(buf, sizeof buf, " at pc 0x%08x", *pc);
      s += buf;
    }
    return s;
  }
  std::uint32_t word_;
  std::optional<std::uint32_t> pc_;
};

class AssemblyError : public Error {
 public:
  AssemblyError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class MemoryFault : public Error {
 public:
  MemoryFault(std::uint32_t addr, const std::string& what)
      : Error(what + " (address " + std::to_string(addr) + ")"), addr_(addr) {}
  std::uint32_t address() const noexcept { return addr_; }

 private:
  std::uint32_t addr_;
};

// Reset/run protocol misuse (start twice, write imem while running, ...).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Any fault raised while the pipeline is stepping; carries where and when.
class SimulationFault : public Error {
 public:
  SimulationFault(std::uint32_t pc, std::uint64_t cycle, const std::string& what,
                  bool illegal_instruction = false)
      : Error(what + " [pc 0x" + hex(pc) + ", cycle " + std::to_string(cycle) + "]"),
        pc_(pc),
        cycle_(cycle),
        illegal_(illegal_instruction) {}
  std::uint32_t pc() const noexcept { return pc_; }
  std::uint64_t cycle() const noexcept { return cycle_; }
  bool illegal_instruction() const noexcept { return illegal_; }

 private:
  static std::string hex(std::uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08x", v);
    return buf;
  }
  std::uint32_t pc_;
  std::uint64_t cycle_;
  bool illegal_;
};

}  // namespace mipscrypt
