#pragma once

// Two-pass assembler and matching disassembler.
//
// Grammar (one statement per line, case-insensitive mnemonics):
//   label:                       labels may share a line with an instruction
//   add $rd, $rs, $rt            also sub/and/or/nor/slt
//   sll $rd, $rt, shamt          also srl
//   addi $rt, $rs, imm           also subi/slti/ori/andi/nori
//   lw $rt, offset($rs)          also sw/lkuw/lklw
//   beq $rs, $rt, label|offset   also bne; numeric offsets are in words,
//                                relative to the instruction after the branch
//   j label|word-address         also jal
//   jr $rs
//   crypt value
//   nop
//   .word value
// Immediates are decimal (optionally negative) or 0x hex. '#' starts a comment.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mipscrypt/error.hpp"
#include "mipscrypt/isa.hpp"

namespace mipscrypt::isa {

inline constexpr std::size_t kMaxImageWords = 1024;

struct Program {
  std::vector<std::uint32_t> words;
  std::map<std::string, std::uint32_t> symbols;  // label -> byte address
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool is_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_' || s[0] == '.'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return true;
}

inline std::optional<long long> parse_int(std::string_view s) {
  s = trim(s);
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) return std::nullopt;
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  }
  long long v = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9')
      d = c - '0';
    else if (base == 16 && std::isxdigit(static_cast<unsigned char>(c)))
      d = std::tolower(static_cast<unsigned char>(c)) - 'a' + 10;
    else
      return std::nullopt;
    v = v * base + d;
    if (v > 0xFFFFFFFFLL) return std::nullopt;
  }
  return neg ? -v : v;
}

struct Statement {
  int line;
  std::string mnemonic;
  std::vector<std::string> operands;
};

class Assembler {
 public:
  Assembler(std::string_view source, std::size_t max_words) : max_words_(max_words) {
    parse(source);
  }

  Program run() {
    Program out;
    out.symbols = labels_;
    std::uint32_t pc = 0;
    for (const auto& st : statements_) {
      out.words.push_back(encode_statement(st, pc));
      pc += 4;
    }
    return out;
  }

 private:
  void parse(std::string_view source) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
      auto nl = source.find('\n', pos);
      if (nl == std::string_view::npos) nl = source.size();
      std::string_view line = source.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      while (true) {
        auto colon = line.find(':');
        if (colon == std::string_view::npos) break;
        auto name = trim(line.substr(0, colon));
        if (!is_ident(name)) throw AssemblyError(line_no, "bad label '" + std::string(name) + "'");
        std::string key(name);
        if (labels_.count(key)) throw AssemblyError(line_no, "duplicate label '" + key + "'");
        labels_[key] = static_cast<std::uint32_t>(statements_.size() * 4);
        line = trim(line.substr(colon + 1));
      }
      if (line.empty()) continue;
      Statement st{line_no, {}, {}};
      auto sp = line.find_first_of(" \t");
      std::string_view head = line.substr(0, sp);
      for (char c : head) st.mnemonic += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (sp != std::string_view::npos) {
        std::string_view rest = trim(line.substr(sp));
        while (!rest.empty()) {
          auto comma = rest.find(',');
          auto tok = trim(rest.substr(0, comma));
          if (tok.empty()) throw AssemblyError(line_no, "empty operand");
          st.operands.emplace_back(tok);
          if (comma == std::string_view::npos) break;
          rest = rest.substr(comma + 1);
          if (trim(rest).empty()) throw AssemblyError(line_no, "trailing comma");
        }
      }
      statements_.push_back(std::move(st));
      if (statements_.size() > max_words_)
        throw AssemblyError(line_no, "image overflow: more than " + std::to_string(max_words_) +
                                         " words");
    }
  }

  [[noreturn]] static void fail(const Statement& st, const std::string& what) {
    throw AssemblyError(st.line, what);
  }

  static void expect_operands(const Statement& st, std::size_t n) {
    if (st.operands.size() != n)
      fail(st, "'" + st.mnemonic + "' expects " + std::to_string(n) + " operand(s), got " +
                   std::to_string(st.operands.size()));
  }

  static unsigned reg(const Statement& st, std::string_view tok) {
    tok = trim(tok);
    if (tok.size() < 2 || tok[0] != '$') fail(st, "expected register, got '" + std::string(tok) + "'");
    auto v = parse_int(tok.substr(1));
    if (!v || *v < 0 || *v > 31 || tok.substr(1).find("0x") != std::string_view::npos)
      fail(st, "bad register '" + std::string(tok) + "'");
    return static_cast<unsigned>(*v);
  }

  static long long number(const Statement& st, std::string_view tok, long long lo, long long hi,
                          const char* what) {
    auto v = parse_int(tok);
    if (!v) fail(st, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
    if (*v < lo || *v > hi)
      fail(st, std::string(what) + " out of range: " + std::string(trim(tok)));
    return *v;
  }

  std::uint32_t encode_statement(const Statement& st, std::uint32_t pc) const {
    if (st.mnemonic == ".word") {
      expect_operands(st, 1);
      return static_cast<std::uint32_t>(number(st, st.operands[0], -0x80000000LL, 0xFFFFFFFFLL, "word"));
    }
    auto op = find_mnemonic(st.mnemonic);
    if (!op) fail(st, "unknown mnemonic '" + st.mnemonic + "'");
    const auto& ops = st.operands;
    Instruction in;
    switch (*op) {
      case Op::Nop:
        expect_operands(st, 0);
        in = make_nop();
        break;
      case Op::Add: case Op::Sub: case Op::And: case Op::Or: case Op::Nor: case Op::Slt:
        expect_operands(st, 3);
        in = make_r(*op, reg(st, ops[0]), reg(st, ops[1]), reg(st, ops[2]));
        break;
      case Op::Sll: case Op::Srl:
        expect_operands(st, 3);
        in = make_shift(*op, reg(st, ops[0]), reg(st, ops[1]),
                        static_cast<unsigned>(number(st, ops[2], 0, 31, "shift amount")));
        break;
      case Op::Addi: case Op::Subi: case Op::Slti: case Op::Ori: case Op::Andi: case Op::Nori: {
        expect_operands(st, 3);
        auto imm = number(st, ops[2], -32768, 65535, "immediate");
        in = make_i(*op, reg(st, ops[0]), reg(st, ops[1]), static_cast<std::int16_t>(imm & 0xFFFF));
        break;
      }
      case Op::Lw: case Op::Sw: case Op::Lkuw: case Op::Lklw: {
        expect_operands(st, 2);
        std::string_view mem = ops[1];
        auto open = mem.find('(');
        auto close = mem.rfind(')');
        if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
            !trim(mem.substr(close + 1)).empty())
          fail(st, "expected offset($rs), got '" + std::string(mem) + "'");
        auto off_tok = trim(mem.substr(0, open));
        long long off = off_tok.empty() ? 0 : number(st, off_tok, -32768, 32767, "offset");
        in = make_i(*op, reg(st, ops[0]), reg(st, mem.substr(open + 1, close - open - 1)),
                    static_cast<std::int16_t>(off));
        break;
      }
      case Op::Beq: case Op::Bne: {
        expect_operands(st, 3);
        long long off;
        if (auto it = labels_.find(std::string(trim(ops[2]))); it != labels_.end()) {
          off = (static_cast<long long>(it->second) - static_cast<long long>(pc) - 4) / 4;
          if (off < -32768 || off > 32767) fail(st, "branch offset out of range");
        } else {
          off = number(st, ops[2], -32768, 32767, "branch offset");
        }
        in = make_i(*op, reg(st, ops[1]), reg(st, ops[0]), static_cast<std::int16_t>(off));
        break;
      }
      case Op::J: case Op::Jal: {
        expect_operands(st, 1);
        std::uint32_t target;
        if (auto it = labels_.find(std::string(trim(ops[0]))); it != labels_.end())
          target = it->second / 4;
        else
          target = static_cast<std::uint32_t>(number(st, ops[0], 0, (1 << 26) - 1, "jump target"));
        in = make_j(*op, target);
        break;
      }
      case Op::Jr:
        expect_operands(st, 1);
        in = make_jr(reg(st, ops[0]));
        break;
      case Op::Crypt:
        expect_operands(st, 1);
        in = make_j(Op::Crypt,
                    static_cast<std::uint32_t>(number(st, ops[0], 0, (1 << 26) - 1, "crypt argument")));
        break;
    }
    return encode(in);
  }

  std::size_t max_words_;
  std::vector<Statement> statements_;
  std::map<std::string, std::uint32_t> labels_;
};

}  // namespace detail

inline Program assemble(std::string_view source, std::size_t max_words = kMaxImageWords) {
  return detail::Assembler(source, max_words).run();
}

inline std::string to_string(const Instruction& in) {
  const auto& m = in.info();
  char buf[64];
  auto r = [](unsigned n) { return "$" + std::to_string(n); };
  switch (in.op) {
    case Op::Nop:
      return "nop";
    case Op::Add: case Op::Sub: case Op::And: case Op::Or: case Op::Nor: case Op::Slt:
      return std::string(m.name) + " " + r(in.rd) + ", " + r(in.rs) + ", " + r(in.rt);
    case Op::Sll: case Op::Srl:
      return std::string(m.name) + " " + r(in.rd) + ", " + r(in.rt) + ", " + std::to_string(in.shamt);
    case Op::Addi: case Op::Subi: case Op::Slti:
      return std::string(m.name) + " " + r(in.rt) + ", " + r(in.rs) + ", " + std::to_string(in.immediate);
    case Op::Ori: case Op::Andi: case Op::Nori:
      return std::string(m.name) + " " + r(in.rt) + ", " + r(in.rs) + ", " +
             std::to_string(static_cast<std::uint16_t>(in.immediate));
    case Op::Lw: case Op::Sw: case Op::Lkuw: case Op::Lklw:
      return std::string(m.name) + " " + r(in.rt) + ", " + std::to_string(in.immediate) + "(" + r(in.rs) + ")";
    case Op::Beq: case Op::Bne:
      return std::string(m.name) + " " + r(in.rs) + ", " + r(in.rt) + ", " + std::to_string(in.immediate);
    case Op::J: case Op::Jal: case Op::Crypt:
      return std::string(m.name) + " " + std::to_string(in.target);
    case Op::Jr:
      return "jr " + r(in.rs);
  }
  std::snprintf(buf, sizeof buf, ".word 0x%08x", encode(in));
  return buf;
}

// Total: words outside the implemented subset render as `.word 0x...`.
inline std::string disassemble(const std::vector<std::uint32_t>& words) {
  std::ostringstream out;
  for (auto w : words) {
    try {
      out << to_string(decode(w)) << '\n';
    } catch (const DecodeError&) {
      char buf[32];
      std::snprintf(buf, sizeof buf, ".word 0x%08x", w);
      out << buf << '\n';
    }
  }
  return out.str();
}

}  // namespace mipscrypt::isa
