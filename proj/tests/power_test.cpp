#include <gtest/gtest.h>

#include "support/harness.hpp"

using namespace mipscrypt;

TEST(Power, FormulaExample) {
  PowerParams p;  // 1 nF, 1.5 V, 218 MHz
  EXPECT_NEAR(dynamic_power(p, 0.2), 0.04905, 1e-12);
  EXPECT_EQ(dynamic_power(p, 0.0), 0.0);
}

TEST(Power, LinearAndQuadratic) {
  PowerParams p{2e-9, 1.2, 100e6};
  const double base = dynamic_power(p, 0.1);
  EXPECT_NEAR(dynamic_power(p, 0.3) / base, 3.0, 1e-12);
  auto q = p;
  q.capacitance_f *= 5;
  EXPECT_NEAR(dynamic_power(q, 0.1) / base, 5.0, 1e-12);
  q = p;
  q.clock_hz *= 7;
  EXPECT_NEAR(dynamic_power(q, 0.1) / base, 7.0, 1e-12);
  q = p;
  q.vdd_v *= 2;
  EXPECT_NEAR(dynamic_power(q, 0.1) / base, 4.0, 1e-12);
}

TEST(Power, RejectsBadParams) {
  EXPECT_THROW(dynamic_power({0, 1.5, 1e6}, 0.1), Error);
  EXPECT_THROW(dynamic_power({1e-9, -1, 1e6}, 0.1), Error);
  EXPECT_THROW(dynamic_power({}, -0.1), Error);
}

TEST(Throughput, CipherConfigurations) {
  EXPECT_EQ(throughput_mbps(218'000'000, 64, 21), 664u);
  EXPECT_EQ(throughput_mbps(209'000'000, 64, 21), 636u);
  EXPECT_EQ(throughput_mbps(210'000'000, 128, 48), 560u);
}

TEST(Throughput, Monotone) {
  for (std::uint64_t lat = 1; lat < 60; ++lat) {
    EXPECT_LE(throughput_mbps(100'000'000, 64, lat + 1), throughput_mbps(100'000'000, 64, lat));
    EXPECT_LE(throughput_mbps(100'000'000, 64, lat), throughput_mbps(150'000'000, 64, lat));
    EXPECT_LE(throughput_mbps(100'000'000, 64, lat), throughput_mbps(100'000'000, 128, lat));
    EXPECT_GT(throughput_mbps(100'000'000, 64, lat), 0u);
  }
  EXPECT_THROW(throughput_mbps(1, 64, 0), Error);
}

TEST(Report, DesKernel) {
  LoadSpec s;
  s.image = isa::assemble(kLatencyKernel).words;
  const auto t = harness::run(s, harness::config(CipherKind::Des));
  PowerParams p;
  p.clock_hz = 218e6;
  const auto r = make_report(t, p);
  EXPECT_EQ(r.latency_r, 20u);
  EXPECT_EQ(r.latency_i, 21u);
  EXPECT_EQ(r.latency_j, 19u);
  EXPECT_EQ(r.throughput_mbps, 664u);
  EXPECT_EQ(r.retired_r, 1u);
  EXPECT_EQ(r.retired_i, 1u);
  EXPECT_EQ(r.retired_j, 3u);
  EXPECT_GE(r.e_sw, 0.0);
  EXPECT_LE(r.e_sw, 1.0);
  EXPECT_DOUBLE_EQ(r.power_w, dynamic_power(p, r.e_sw));

  const auto back = parse_report(to_text(r));
  EXPECT_EQ(back.throughput_mbps, r.throughput_mbps);
  EXPECT_EQ(back.cycles, r.cycles);
  EXPECT_NEAR(back.e_sw, r.e_sw, 1e-9 * r.e_sw);
  EXPECT_FALSE(back.gating);
}

TEST(Report, TdesAndAesKernels) {
  LoadSpec s;
  s.image = isa::assemble(kLatencyKernel).words;
  PowerParams p;
  p.clock_hz = static_cast<double>(default_clock_hz(CipherKind::Tdes));
  EXPECT_EQ(make_report(harness::run(s, harness::config(CipherKind::Tdes)), p).throughput_mbps, 636u);
  p.clock_hz = static_cast<double>(default_clock_hz(CipherKind::Aes));
  EXPECT_EQ(make_report(harness::run(s, harness::config(CipherKind::Aes)), p).throughput_mbps, 560u);
}

TEST(Report, EmptyTraceRejected) {
  EXPECT_THROW(make_report(RunTrace{}, PowerParams{}), Error);
}

TEST(Report, GatedActivityNotAbove) {
  for (const auto& prog : corpus::programs()) {
    const auto spec = corpus::load_spec(prog);
    const auto off = make_report(harness::run(spec, harness::config(CipherKind::Des, false)), {});
    const auto on = make_report(harness::run(spec, harness::config(CipherKind::Des, true)), {});
    EXPECT_LE(on.e_sw, off.e_sw) << prog.name;
    EXPECT_LE(on.power_w, off.power_w) << prog.name;
    EXPECT_TRUE(on.gating);
  }
}

TEST(Report, ParseRejectsMalformed) {
  EXPECT_THROW(parse_report("cipher=des\n"), Error);
  EXPECT_THROW(parse_key_values("no equals sign\n"), Error);
}
