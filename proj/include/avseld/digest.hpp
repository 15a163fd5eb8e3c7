#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace avseld {

// 64-bit FNV-1a. Used for provenance records and determinism audits, where a
// stable, dependency-free content hash is enough.
class Fnv1a {
 public:
  void update(const void* data, std::size_t size);
  void update(std::string_view text) { update(text.data(), text.size()); }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 14695981039346656037ull;
};

std::uint64_t fnv1a(std::string_view text);

// 16 lowercase hex digits.
std::string digest_hex(std::uint64_t value);

// Digest of a file's raw bytes; throws data_error if unreadable.
std::string file_digest_hex(const std::filesystem::path& path);

}  // namespace avseld
