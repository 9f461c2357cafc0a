#pragma once

// mipscrypt command-line driver. Exit statuses: 0 success/halt, 1 usage
// error, 2 assembly error, 3 simulation fault, 4 cycle cap reached.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mipscrypt/mipscrypt.hpp"

namespace mipscrypt::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kAsmError = 2, kFault = 3, kCycleCap = 4 };

struct RunOptions {
  std::string cipher = "des";
  std::string key;
  std::optional<unsigned long long> clock_hz;
  std::string gating = "off";
  std::optional<unsigned> crypto_cycles;
  std::size_t imem_bytes = kDefaultMemoryBytes;
  std::size_t dmem_bytes = kDefaultMemoryBytes;
  std::string trace_path;
  std::string report_path;
  std::string dmem_path;
  unsigned long long max_cycles = 1'000'000;
  bool encrypted = false;
  bool block_cache = false;
};

inline void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--cipher", o.cipher, "des|tdes|aes")->check(CLI::IsMember({"des", "tdes", "aes"}));
  cmd->add_option("--key", o.key, "128-bit key, 32 hex characters (K3K2K1K0)");
  cmd->add_option("--clock-hz", o.clock_hz, "clock rate for the report");
  cmd->add_option("--gating", o.gating, "on|off")->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--crypto-cycles", o.crypto_cycles, "cycles charged per cipher-path fetch")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--imem-bytes", o.imem_bytes, "instruction memory size");
  cmd->add_option("--dmem-bytes", o.dmem_bytes, "data memory size");
  cmd->add_option("--trace", o.trace_path, "write the per-cycle trace here");
  cmd->add_option("--report", o.report_path, "write the report here instead of stdout");
  cmd->add_option("--max-cycles", o.max_cycles, "cycle cap");
}

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int main(int argc, const char* const argv[]) {
    CLI::App app{"Cycle-accurate MIPS crypto processor model"};
    app.require_subcommand(1);

    std::string asm_src, asm_out;
    bool listing = false;
    std::size_t asm_imem = kMaxMemoryBytes;
    auto* asm_cmd = app.add_subcommand("asm", "assemble a source file into a big-endian word image");
    asm_cmd->add_option("source", asm_src)->required();
    asm_cmd->add_option("-o,--out", asm_out)->required();
    asm_cmd->add_flag("--listing", listing, "print a disassembly listing");
    asm_cmd->add_option("--imem-bytes", asm_imem, "instruction memory capacity");

    std::string enc_in, enc_out, enc_cipher = "des", enc_key;
    bool enc_decrypt = false;
    auto* enc_cmd = app.add_subcommand("encrypt-image", "ECB-encrypt a word image (NOP padded)");
    enc_cmd->add_option("image", enc_in)->required();
    enc_cmd->add_option("-o,--out", enc_out)->required();
    enc_cmd->add_option("--cipher", enc_cipher)->check(CLI::IsMember({"des", "tdes", "aes"}));
    enc_cmd->add_option("--key", enc_key)->required();
    enc_cmd->add_flag("--decrypt", enc_decrypt, "decrypt instead");

    RunOptions run_opts;
    std::string run_image, run_dmem;
    auto* run_cmd = app.add_subcommand("run", "load, start and run an image to halt");
    run_cmd->add_option("image", run_image)->required();
    add_run_options(run_cmd, run_opts);
    run_cmd->add_option("--dmem", run_opts.dmem_path, "raw data-memory preload");
    run_cmd->add_flag("--encrypted", run_opts.encrypted, "image is encrypted; decrypt every fetch");
    run_cmd->add_flag("--block-cache", run_opts.block_cache, "charge the cipher once per fetched block");

    RunOptions rep_opts;
    auto* rep_cmd = app.add_subcommand("report", "run the built-in latency kernel and report");
    add_run_options(rep_cmd, rep_opts);

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out_ << app.help();
        return kOk;
      }
      err_ << e.what() << '\n';
      return kUsage;
    }

    try {
      if (asm_cmd->parsed()) return cmd_asm(asm_src, asm_out, listing, asm_imem);
      if (enc_cmd->parsed()) return cmd_encrypt_image(enc_in, enc_out, enc_cipher, enc_key, enc_decrypt);
      if (run_cmd->parsed()) {
        auto image = read_image(run_image);
        return cmd_run(image, run_opts);
      }
      if (rep_cmd->parsed()) {
        auto image = isa::assemble(kLatencyKernel).words;
        return cmd_run(image, rep_opts);
      }
    } catch (const AssemblyError& e) {
      err_ << "error: " << e.what() << '\n';
      return kAsmError;
    } catch (const SimulationFault& e) {
      err_ << "fault: " << e.what() << '\n';
      return kFault;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      return kUsage;
    }
    return kUsage;
  }

 private:
  int cmd_asm(const std::string& src, const std::string& out_path, bool listing, std::size_t imem_bytes) {
    std::ifstream in(src);
    if (!in) throw Error("cannot open " + src);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto prog = isa::assemble(text, imem_bytes / 4);
    write_image(out_path, prog.words);
    if (listing) {
      std::istringstream lines(isa::disassemble(prog.words));
      std::string line;
      char addr[16];
      for (std::size_t i = 0; std::getline(lines, line); ++i) {
        std::snprintf(addr, sizeof addr, "%04zx", i * 4);
        char word[16];
        std::snprintf(word, sizeof word, "%08x", prog.words[i]);
        out_ << addr << "  " << word << "  " << line << '\n';
      }
    }
    return kOk;
  }

  int cmd_encrypt_image(const std::string& in_path, const std::string& out_path, const std::string& cipher,
                        const std::string& key, bool decrypt) {
    const auto kind = *parse_cipher(cipher);
    const auto words = read_image(in_path);
    const auto k = parse_key_hex(key);
    write_image(out_path, decrypt ? decrypt_image(words, kind, k) : encrypt_image(words, kind, k));
    return kOk;
  }

  int cmd_run(const std::vector<std::uint32_t>& image, const RunOptions& o) {
    const auto kind = *parse_cipher(o.cipher);
    PipelineConfig cfg = PipelineConfig::for_cipher(kind);
    if (o.crypto_cycles) cfg.crypto_block_cycles = *o.crypto_cycles;
    cfg.gating_enabled = o.gating == "on";
    cfg.decrypt_ifetch = o.encrypted;
    cfg.per_instruction_crypto_charge = !o.block_cache;
    if (o.encrypted && o.key.empty()) throw Error("--encrypted requires --key");

    LoadSpec spec;
    spec.image = image;
    spec.imem_bytes = o.imem_bytes;
    spec.dmem_bytes = o.dmem_bytes;
    if (!o.key.empty()) spec.keys = parse_key_hex(o.key);
    if (!o.dmem_path.empty()) spec.dmem_init = read_bytes(o.dmem_path);

    Pipeline pipe = make_pipeline(spec, cfg);
    RunTrace trace;
    try {
      trace = pipe.run(o.max_cycles);
    } catch (const SimulationFault&) {
      if (!o.trace_path.empty()) write_text(o.trace_path, to_text(pipe.trace()));
      throw;
    }
    if (!o.trace_path.empty()) write_text(o.trace_path, to_text(trace));

    PowerParams params;
    params.clock_hz = static_cast<double>(o.clock_hz.value_or(default_clock_hz(kind)));
    if (trace.retired_count() > 0) {
      const std::string report = to_text(make_report(trace, params));
      if (o.report_path.empty())
        out_ << report;
      else
        write_text(o.report_path, report);
    }
    if (trace.status == RunStatus::CycleCap) {
      err_ << "cycle cap reached after " << trace.cycle_count << " cycles\n";
      return kCycleCap;
    }
    return kOk;
  }

  static void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path);
    f << text;
  }

  std::ostream& out_;
  std::ostream& err_;
};

inline int run_cli(int argc, const char* const argv[], std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  return Cli(out, err).main(argc, argv);
}

}  // namespace mipscrypt::cli
