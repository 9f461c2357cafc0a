#pragma once

#include <sstream>
#include <string>

#include "mipscrypt/mipscrypt.hpp"
#include "support/corpus.hpp"
#include "support/reference_interpreter.hpp"

namespace harness {

inline mipscrypt::RunTrace run(const mipscrypt::LoadSpec& spec, const mipscrypt::PipelineConfig& cfg,
                               std::uint64_t cap = 200'000) {
  return mipscrypt::make_pipeline(spec, cfg).run(cap);
}

struct Outcome {
  mipscrypt::RunTrace trace;
  mipscrypt::MachineState state;
};

inline Outcome run_full(const mipscrypt::LoadSpec& spec, const mipscrypt::PipelineConfig& cfg,
                        std::uint64_t cap = 200'000) {
  auto p = mipscrypt::make_pipeline(spec, cfg);
  auto t = p.run(cap);
  return {std::move(t), p.machine()};
}

// Empty string when equal; otherwise the first difference.
inline std::string arch_diff(const mipscrypt::MachineState& a, const mipscrypt::MachineState& b) {
  std::ostringstream out;
  for (unsigned r = 0; r < 32; ++r)
    if (a.rf.read(r) != b.rf.read(r)) {
      out << "$" << r << ": " << std::hex << a.rf.read(r) << " vs " << b.rf.read(r);
      return out.str();
    }
  const auto& da = a.dmem().bytes();
  const auto& db = b.dmem().bytes();
  if (da.size() != db.size()) return "dmem size";
  for (std::size_t i = 0; i < da.size(); ++i)
    if (da[i] != db[i]) {
      out << "dmem[" << i << "]: " << int(da[i]) << " vs " << int(db[i]);
      return out.str();
    }
  if (!(a.keys == b.keys)) return "key register";
  if (a.crypt_enabled != b.crypt_enabled) return "crypt mode";
  return {};
}

inline mipscrypt::PipelineConfig config(mipscrypt::CipherKind k, bool gating = false) {
  auto c = mipscrypt::PipelineConfig::for_cipher(k);
  c.gating_enabled = gating;
  return c;
}

inline mipscrypt::LoadSpec encrypted(mipscrypt::LoadSpec spec, mipscrypt::CipherKind k) {
  spec.image = mipscrypt::encrypt_image(spec.image, k, *spec.keys);
  return spec;
}

}  // namespace harness
