#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support/corpus.hpp"

namespace fs = std::filesystem;
using namespace mipscrypt;

namespace {

const std::string kKeyHex = "0123456789abcdef133457799bbcdff1";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mipscrypt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mipscrypt");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, AssembleThreeInstructions) {
  write("p.s", "add $3, $1, $2\nnop\nj 0\n");
  ASSERT_EQ(cli({"asm", path("p.s"), "-o", path("p.bin")}), 0) << err_.str();
  EXPECT_EQ(fs::file_size(path("p.bin")), 12u);
  EXPECT_EQ(read_image(path("p.bin")), (std::vector<std::uint32_t>{0x00221820, 0, 0x08000000}));
  const auto bytes = read_bytes(path("p.bin"));
  EXPECT_EQ(bytes[0], 0x00);
  EXPECT_EQ(bytes[1], 0x22);
  EXPECT_EQ(bytes[3], 0x20);
}

TEST_F(CliTest, ListingRoundTrips) {
  write("p.s", corpus::find("call_return").source);
  ASSERT_EQ(cli({"asm", path("p.s"), "-o", path("p.bin"), "--listing"}), 0);
  EXPECT_NE(out_.str().find("0000  "), std::string::npos);
  const auto words = read_image(path("p.bin"));
  write("q.s", isa::disassemble(words));
  ASSERT_EQ(cli({"asm", path("q.s"), "-o", path("q.bin")}), 0);
  EXPECT_EQ(read_image(path("q.bin")), words);
}

TEST_F(CliTest, UnknownMnemonicNamesLine) {
  write("bad.s", "nop\nnop\nfrob $1, $2\n");
  EXPECT_EQ(cli({"asm", path("bad.s"), "-o", path("bad.bin")}), 2);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos) << err_.str();
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}), 1);
  EXPECT_EQ(cli({"run"}), 1);
  EXPECT_EQ(cli({"report", "--cipher", "rc4"}), 1);
  EXPECT_EQ(cli({"run", path("missing.bin")}), 1);
  EXPECT_EQ(cli({"--help"}), 0);
}

TEST_F(CliTest, EncryptImageRoundTrip) {
  write_image(path("p.bin"), {0x00221820, 0x08000001});
  ASSERT_EQ(cli({"encrypt-image", path("p.bin"), "-o", path("e.bin"), "--cipher", "des", "--key", kKeyHex}), 0);
  const auto enc = read_image(path("e.bin"));
  ASSERT_EQ(enc.size(), 2u);
  const std::uint64_t ct = des::encrypt(0x0022182008000001, des_key(parse_key_hex(kKeyHex)));
  EXPECT_EQ(enc[0], static_cast<std::uint32_t>(ct >> 32));
  EXPECT_EQ(enc[1], static_cast<std::uint32_t>(ct));
  ASSERT_EQ(cli({"encrypt-image", path("e.bin"), "-o", path("d.bin"), "--key", kKeyHex, "--decrypt"}), 0);
  EXPECT_EQ(read_image(path("d.bin")), (std::vector<std::uint32_t>{0x00221820, 0x08000001}));
}

TEST_F(CliTest, EncryptImagePadsWithNop) {
  write_image(path("p.bin"), {1, 2, 3});
  ASSERT_EQ(cli({"encrypt-image", path("p.bin"), "-o", path("e.bin"), "--key", kKeyHex}), 0);
  const auto enc = read_image(path("e.bin"));
  ASSERT_EQ(enc.size(), 4u);
  EXPECT_EQ(decrypt_image(enc, CipherKind::Des, parse_key_hex(kKeyHex)), (std::vector<std::uint32_t>{1, 2, 3, 0}));
  ASSERT_EQ(cli({"encrypt-image", path("p.bin"), "-o", path("a.bin"), "--cipher", "aes", "--key", kKeyHex}), 0);
  EXPECT_EQ(read_image(path("a.bin")).size(), 4u);
}

TEST_F(CliTest, ReportDes) {
  ASSERT_EQ(cli({"report", "--cipher", "des", "--clock-hz", "218000000"}), 0) << err_.str();
  const auto r = parse_report(out_.str());
  EXPECT_EQ(r.throughput_mbps, 664u);
  EXPECT_EQ(r.latency_r, 20u);
  EXPECT_EQ(r.clock_hz, 218000000u);
  ASSERT_EQ(cli({"report", "--cipher", "aes"}), 0);
  EXPECT_EQ(parse_report(out_.str()).throughput_mbps, 560u);
}

TEST_F(CliTest, RunWritesReportAndTrace) {
  write_image(path("k.bin"), isa::assemble(kLatencyKernel).words);
  ASSERT_EQ(cli({"run", path("k.bin"), "--clock-hz", "218000000", "--report", path("r.txt"), "--trace",
                 path("t.txt"), "--gating", "on"}),
            0)
      << err_.str();
  const auto r = parse_report(read("r.txt"));
  EXPECT_EQ(r.throughput_mbps, 664u);
  EXPECT_TRUE(r.gating);
  const auto trace = read("t.txt");
  EXPECT_EQ(trace.rfind("1 IF=@0000", 0), 0u);
  EXPECT_EQ(static_cast<std::uint64_t>(std::count(trace.begin(), trace.end(), '\n')), r.cycles);
}

TEST_F(CliTest, Deterministic) {
  const auto prog = corpus::find("bubble_sort");
  write_image(path("k.bin"), isa::assemble(prog.source).words);
  write_bytes(path("d.bin"), prog.dmem);
  std::vector<std::string> args{"run", path("k.bin"), "--dmem", path("d.bin"), "--imem-bytes", "1024"};
  ASSERT_EQ(cli(args), 0) << err_.str();
  const auto first = out_.str();
  ASSERT_EQ(cli(args), 0);
  EXPECT_EQ(out_.str(), first);
}

TEST_F(CliTest, MaxCyclesCap) {
  write_image(path("loop.bin"), isa::assemble("l: addi $1, $1, 1\nj l\n").words);
  EXPECT_EQ(cli({"run", path("loop.bin"), "--max-cycles", "10"}), 4);
  EXPECT_NE(err_.str().find("cycle cap"), std::string::npos);
}

TEST_F(CliTest, EncryptedRun) {
  write_image(path("p.bin"), isa::assemble(corpus::find("arith_basic").source).words);
  ASSERT_EQ(cli({"encrypt-image", path("p.bin"), "-o", path("e.bin"), "--key", kKeyHex}), 0);
  ASSERT_EQ(cli({"run", path("e.bin"), "--encrypted", "--key", kKeyHex}), 0) << err_.str();
  EXPECT_EQ(cli({"run", path("e.bin"), "--encrypted"}), 1);
}

TEST_F(CliTest, WrongKeyFaults) {
  write_image(path("p.bin"), isa::assemble(corpus::find("arith_basic").source).words);
  ASSERT_EQ(cli({"encrypt-image", path("p.bin"), "-o", path("e.bin"), "--key", kKeyHex}), 0);
  EXPECT_EQ(cli({"run", path("e.bin"), "--encrypted", "--key", "00000000000000000000000000000001", "--trace",
                 path("t.txt")}),
            3);
  EXPECT_NE(err_.str().find("illegal instruction"), std::string::npos) << err_.str();
  EXPECT_TRUE(fs::exists(path("t.txt")));
}

TEST_F(CliTest, SamplesAssembleAndRun) {
  const fs::path dir = MIPSCRYPT_SAMPLES_DIR;
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".s") continue;
    ++count;
    const auto bin = path(entry.path().stem().string() + ".bin");
    ASSERT_EQ(cli({"asm", entry.path().string(), "-o", bin}), 0) << entry.path() << err_.str();
    EXPECT_EQ(cli({"run", bin, "--key", kKeyHex}), 0) << entry.path() << err_.str();
  }
  EXPECT_GE(count, 4u);
}

TEST_F(CliTest, LatencySampleMatchesReportKernel) {
  std::ifstream in(std::string(MIPSCRYPT_SAMPLES_DIR) + "/latency.s");
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  EXPECT_EQ(isa::assemble(text).words, isa::assemble(kLatencyKernel).words);
}
