#include "artifacts.hpp"

#include "roughkit/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <memory>
#include <stdexcept>

namespace roughkit::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(hex[digest[k] >> 4]);
    out.push_back(hex[digest[k] & 15]);
  }
  return out;
}

Artifacts::Artifacts(const std::filesystem::path& root, const Json& config) : config_(config) {
  const std::string name = config.at("experiment").get<std::string>() + "-" + std::to_string(config.at("seed").get<std::uint64_t>());
  dir_ = root / name;
  std::error_code ec;
  std::filesystem::remove_all(dir_, ec);
  std::filesystem::create_directories(dir_);
}

void Artifacts::add(const std::string& name, const std::string& content) {
  if (name == "manifest.json") throw std::logic_error("manifest.json is reserved");
  io::write_text(dir_ / name, content);
  entries_.erase(std::remove_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.name == name; }),
                 entries_.end());
  entries_.push_back({name, content.size(), sha256_hex(content)});
}

void Artifacts::add_json(const std::string& name, const Json& value) { add(name, value.dump(2) + "\n"); }

void Artifacts::finish() {
  add_json("config.json", config_);
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.name < b.name; });
  Json files = Json::array();
  for (const auto& e : entries_) files.push_back({{"file", e.name}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  Json manifest;
  manifest["experiment"] = config_.at("experiment");
  manifest["seed"] = config_.at("seed");
  manifest["files"] = std::move(files);
  io::write_text(dir_ / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace roughkit::cli
