#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughkit::cli {

using Json = nlohmann::ordered_json;

/// Configuration problems: unknown keys, wrong types, out-of-range values,
/// missing files. Mapped to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { Integer, Real, Boolean, String, RealList, StringList };

struct Param {
  std::string key;
  Kind kind;
  Json fallback;  // null: no default
  std::optional<double> min;
  std::optional<double> max;
  bool exclusive = false;  // bounds are open
  std::string help;
  std::vector<std::string> choices = {};
  bool required = false;
};

/// Names of all experiments, in documentation order.
const std::vector<std::string>& experiment_names();

/// Parameter table of one experiment; throws ConfigError for unknown names.
const std::vector<Param>& schema(const std::string& experiment);

/// Defaults, overlaid with the file config and then with the flag config,
/// validated against the schema. Keys with a null default that are absent
/// stay absent.
Json resolve(const std::string& experiment, const Json& file_config, const Json& flag_config);

/// Throws ConfigError naming the first offending key.
void validate(const std::string& experiment, const Json& config);

/// Markdown table of every experiment's parameters.
std::string schema_markdown();

}  // namespace roughkit::cli
