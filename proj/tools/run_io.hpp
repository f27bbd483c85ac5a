#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "incomedist/keyvalue.hpp"

namespace incomedist::cli {

inline constexpr const char* kToolVersion = "1.0.0";

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Writes through a temporary sibling file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

/// Everything needed to repeat a run. Resolved parameters are written as plain
/// keys so the manifest can be passed back with --config.
struct RunManifest {
  std::string command;
  KeyValueConfig resolved;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::filesystem::path>> inputs;
  std::vector<std::pair<std::string, std::filesystem::path>> outputs;

  std::string to_text() const;
};

}  // namespace incomedist::cli
