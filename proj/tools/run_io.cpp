#include "run_io.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

#include <openssl/evp.h>

#include "incomedist/errors.hpp"

namespace incomedist::cli {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericError("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string RunManifest::to_text() const {
  KeyValueConfig c = resolved;
  c.set("manifest.command", command);
  c.set("manifest.tool_version", kToolVersion);
  if (seed) c.set("seed", std::to_string(*seed));
  for (const auto& [name, path] : inputs) {
    c.set("manifest.input." + name + ".path", path.string());
    c.set("manifest.input." + name + ".sha256", sha256_file(path));
  }
  for (const auto& [name, path] : outputs) {
    c.set("manifest.output." + name + ".path", path.filename().string());
    c.set("manifest.output." + name + ".sha256", sha256_file(path));
  }
  return "# incomedist run manifest\n" + c.to_text();
}

}  // namespace incomedist::cli
