#pragma once

#include "schema.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace roughkit::cli {

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Output directory <root>/<experiment>-<seed>/. Files are written as they
/// are added; finish() writes config.json and a manifest.json that lists
/// every file (itself excluded) with its size and SHA-256.
class Artifacts {
 public:
  Artifacts(const std::filesystem::path& root, const Json& config);

  const std::filesystem::path& dir() const { return dir_; }
  void add(const std::string& name, const std::string& content);
  void add_json(const std::string& name, const Json& value);
  void finish();

 private:
  struct Entry {
    std::string name;
    std::size_t bytes;
    std::string sha256;
  };
  std::filesystem::path dir_;
  Json config_;
  std::vector<Entry> entries_;
};

}  // namespace roughkit::cli
