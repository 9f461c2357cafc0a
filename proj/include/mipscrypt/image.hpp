#pragma once

// Raw big-endian word images on disk.

#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "mipscrypt/error.hpp"

namespace mipscrypt {

inline std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline std::vector<std::uint8_t> words_to_bytes(const std::vector<std::uint32_t>& words) {
  std::vector<std::uint8_t> out;
  out.reserve(words.size() * 4);
  for (auto w : words)
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(w >> (24 - 8 * i)));
  return out;
}

inline std::vector<std::uint32_t> bytes_to_words(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() % 4) throw Error("image length " + std::to_string(bytes.size()) + " is not a multiple of 4");
  std::vector<std::uint32_t> words(bytes.size() / 4);
  for (std::size_t i = 0; i < words.size(); ++i)
    words[i] = std::uint32_t{bytes[4 * i]} << 24 | std::uint32_t{bytes[4 * i + 1]} << 16 |
               std::uint32_t{bytes[4 * i + 2]} << 8 | bytes[4 * i + 3];
  return words;
}

inline std::vector<std::uint32_t> read_image(const std::string& path) { return bytes_to_words(read_bytes(path)); }
inline void write_image(const std::string& path, const std::vector<std::uint32_t>& words) {
  write_bytes(path, words_to_bytes(words));
}

}  // namespace mipscrypt
