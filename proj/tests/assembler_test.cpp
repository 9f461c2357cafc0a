#include <gtest/gtest.h>

#include "mipscrypt/assembler.hpp"
#include "support/corpus.hpp"

using namespace mipscrypt;
using namespace mipscrypt::isa;

TEST(Assemble, SingleAdd) {
  EXPECT_EQ(assemble("add $3, $1, $2").words, std::vector<std::uint32_t>{0x00221820});
}

TEST(Assemble, SelfLoopBranchOffset) {
  const auto p = assemble("loop: beq $1, $1, loop");
  ASSERT_EQ(p.words.size(), 1u);
  EXPECT_EQ(p.words[0] & 0xFFFF, 0xFFFFu);
  EXPECT_EQ(p.symbols.at("loop"), 0u);
}

TEST(Assemble, EmptySource) {
  EXPECT_TRUE(assemble("").words.empty());
  EXPECT_TRUE(assemble("# only a comment\n\n   \n").words.empty());
}

TEST(Assemble, ForwardLabelsAndJumps) {
  const auto p = assemble(R"(
        beq $0, $0, end   # forward
        nop
end:    j end
        jal 0
)");
  ASSERT_EQ(p.words.size(), 4u);
  EXPECT_EQ(decode(p.words[0]).immediate, 1);
  EXPECT_EQ(p.words[2], 0x08000002u);
  EXPECT_EQ(p.words[3], 0x0C000000u);
}

TEST(Assemble, OperandForms) {
  const auto p = assemble(R"(
    lw   $4, -8($29)
    sw   $4, 0x10($0)
    sll  $2, $1, 31
    ori  $5, $0, 0xffff
    addi $6, $0, -32768
    crypt 1
    lkuw $1, 0x80($0)
    .word 0x12345678
)");
  ASSERT_EQ(p.words.size(), 8u);
  EXPECT_EQ(decode(p.words[0]), make_i(Op::Lw, 4, 29, -8));
  EXPECT_EQ(decode(p.words[1]), make_i(Op::Sw, 4, 0, 0x10));
  EXPECT_EQ(decode(p.words[2]), make_shift(Op::Sll, 2, 1, 31));
  EXPECT_EQ(p.words[3] & 0xFFFF, 0xFFFFu);
  EXPECT_EQ(decode(p.words[4]).immediate, -32768);
  EXPECT_EQ(p.words[5], 0xFC000001u);
  EXPECT_EQ(decode(p.words[6]), make_i(Op::Lkuw, 1, 0, 0x80));
  EXPECT_EQ(p.words[7], 0x12345678u);
}

static int error_line(const std::string& src) {
  try {
    assemble(src);
  } catch (const AssemblyError& e) {
    return e.line();
  }
  return -1;
}

TEST(AssembleErrors, ReportLine) {
  EXPECT_EQ(error_line("nop\nfrobnicate $1\n"), 2);
  EXPECT_EQ(error_line("a: nop\na: nop\n"), 2);
  EXPECT_EQ(error_line("addi $1, $0, 70000"), 1);
  EXPECT_EQ(error_line("add $1, $2"), 1);
  EXPECT_EQ(error_line("add $1, $2, $32"), 1);
  EXPECT_EQ(error_line("nop\nnop\nbeq $0, $0, nowhere"), 3);
  EXPECT_EQ(error_line("sll $1, $2, 32"), 1);
}

TEST(AssembleErrors, ImageOverflow) {
  std::string src;
  for (int i = 0; i < 65; ++i) src += "nop\n";
  EXPECT_THROW(assemble(src, 64), AssemblyError);
  EXPECT_EQ(assemble(src, 65).words.size(), 65u);
}

TEST(Disassemble, Examples) {
  EXPECT_EQ(disassemble({0x00221820}), "add $3, $1, $2\n");
  EXPECT_EQ(disassemble({0}), "nop\n");
  EXPECT_EQ(disassemble({0x04000000}), ".word 0x04000000\n");
}

TEST(AssemblerProperty, CorpusRoundTrip) {
  for (const auto& prog : corpus::programs()) {
    const auto first = assemble(prog.source).words;
    const auto again = assemble(disassemble(first)).words;
    EXPECT_EQ(first, again) << prog.name;
    EXPECT_EQ(assemble(disassemble(again)).words, again) << prog.name;
  }
}
