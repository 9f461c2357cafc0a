#pragma once

// Dynamic-power estimate P = 0.5 * C * Vdd^2 * E(sw) * F_clk, data
// throughput, and the per-run report.

#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>

#include "mipscrypt/cipher.hpp"
#include "mipscrypt/error.hpp"
#include "mipscrypt/pipeline.hpp"

namespace mipscrypt {

struct PowerParams {
  double capacitance_f = 1e-9;
  double vdd_v = 1.5;
  double clock_hz = 218e6;

  void validate() const {
    if (!(capacitance_f > 0) || !(vdd_v > 0) || !(clock_hz > 0))
      throw Error("power parameters must be strictly positive");
  }
};

inline double dynamic_power(const PowerParams& p, double e_sw) {
  p.validate();
  if (e_sw < 0) throw Error("switching activity must be non-negative");
  return 0.5 * p.capacitance_f * p.vdd_v * p.vdd_v * e_sw * p.clock_hz;
}

// Mbit/s, floored: clock * block width / cycles per block.
inline std::uint64_t throughput_mbps(std::uint64_t clock_hz, std::uint64_t block_bits,
                                     std::uint64_t latency_cycles) {
  if (latency_cycles == 0) throw Error("throughput: latency must be positive");
  if (clock_hz == 0 || block_bits == 0) throw Error("throughput: clock and block width must be positive");
  return clock_hz * block_bits / latency_cycles / 1'000'000;
}

struct RunReport {
  CipherKind cipher = CipherKind::Des;
  std::uint64_t clock_hz = 0;
  std::uint64_t cycles = 0;
  std::uint64_t retired_r = 0, retired_i = 0, retired_j = 0;
  std::uint64_t latency_r = 0, latency_i = 0, latency_j = 0;
  double e_sw = 0.0;
  double power_w = 0.0;  // estimate; no device calibration
  std::uint64_t throughput_mbps = 0;
  bool gating = false;
};

// Throughput uses the longest per-class latency as the per-block divisor.
inline RunReport make_report(const RunTrace& trace, const PowerParams& params) {
  if (trace.retired_count() == 0) throw Error("cannot report on a run that retired no instructions");
  params.validate();
  RunReport r;
  r.cipher = trace.config.cipher;
  r.clock_hz = static_cast<std::uint64_t>(params.clock_hz);
  r.cycles = trace.cycle_count;
  r.retired_r = trace.retired_by_class[0];
  r.retired_i = trace.retired_by_class[1];
  r.retired_j = trace.retired_by_class[2];
  r.latency_r = trace.class_latency(isa::InstrClass::R);
  r.latency_i = trace.class_latency(isa::InstrClass::I);
  r.latency_j = trace.class_latency(isa::InstrClass::J);
  r.e_sw = trace.activity.e_sw();
  r.power_w = dynamic_power(params, r.e_sw);
  const auto worst = std::max({r.latency_r, r.latency_i, r.latency_j});
  r.throughput_mbps = throughput_mbps(r.clock_hz, block_bits(r.cipher), worst);
  r.gating = trace.config.gating_enabled;
  return r;
}

// key=value lines, fixed field order.
inline std::string to_text(const RunReport& r) {
  char num[64];
  auto real = [&](double v) {
    std::snprintf(num, sizeof num, "%.9g", v);
    return std::string(num);
  };
  std::ostringstream o;
  o << "cipher=" << to_string(r.cipher) << '\n'
    << "clock_hz=" << r.clock_hz << '\n'
    << "cycles=" << r.cycles << '\n'
    << "retired_r=" << r.retired_r << '\n'
    << "retired_i=" << r.retired_i << '\n'
    << "retired_j=" << r.retired_j << '\n'
    << "latency_r=" << r.latency_r << '\n'
    << "latency_i=" << r.latency_i << '\n'
    << "latency_j=" << r.latency_j << '\n'
    << "e_sw=" << real(r.e_sw) << '\n'
    << "power_w=" << real(r.power_w) << '\n'
    << "throughput_mbps=" << r.throughput_mbps << '\n'
    << "gating=" << (r.gating ? "on" : "off") << '\n';
  return o.str();
}

inline std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("malformed report line: " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

inline RunReport parse_report(const std::string& text) {
  auto kv = parse_key_values(text);
  auto get = [&](const char* k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw Error(std::string("report missing field ") + k);
    return it->second;
  };
  auto u = [&](const char* k) { return static_cast<std::uint64_t>(std::stoull(get(k))); };
  RunReport r;
  auto c = parse_cipher(get("cipher"));
  if (!c) throw Error("report: unknown cipher " + get("cipher"));
  r.cipher = *c;
  r.clock_hz = u("clock_hz");
  r.cycles = u("cycles");
  r.retired_r = u("retired_r");
  r.retired_i = u("retired_i");
  r.retired_j = u("retired_j");
  r.latency_r = u("latency_r");
  r.latency_i = u("latency_i");
  r.latency_j = u("latency_j");
  r.e_sw = std::stod(get("e_sw"));
  r.power_w = std::stod(get("power_w"));
  r.throughput_mbps = u("throughput_mbps");
  r.gating = get("gating") == "on";
  return r;
}

}  // namespace mipscrypt
