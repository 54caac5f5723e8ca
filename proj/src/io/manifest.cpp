#include "metatomo/errors.hpp"
#include "metatomo/io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>
#include <spdlog/fmt/fmt.h>

namespace metatomo::io {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string tool_version() { return METATOMO_VERSION; }

Json manifest_to_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  Json inputs = Json::object();
  for (const auto& [path, digest] : m.input_digests) inputs[path] = digest;
  j["inputs"] = std::move(inputs);
  if (m.seed) {
    j["seed"] = *m.seed;
  } else {
    j["seed"] = nullptr;
  }
  j["version"] = m.version;
  j["timestamp"] = m.timestamp;
  return j;
}

}  // namespace metatomo::io
