#include "artifacts.hpp"
#include "experiments.hpp"
#include "schema.hpp"

#include "roughkit/error.hpp"
#include "roughkit/io.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <iostream>
#include <map>

using namespace roughkit;
using namespace roughkit::cli;

namespace {

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (auto& c : s)
    if (c == '_') c = '-';
  return "--" + s;
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw ConfigError("'" + key + "': cannot parse \"" + text + "\" as a number");
  return v;
}

Json flag_value(const Param& p, const std::string& text) {
  switch (p.kind) {
    case Kind::Integer: {
      const double v = parse_number(p.key, text);
      if (std::floor(v) != v) throw ConfigError("'" + p.key + "' must be an integer");
      return static_cast<long long>(v);
    }
    case Kind::Real: return parse_number(p.key, text);
    case Kind::Boolean: return true;
    case Kind::String: return text;
    case Kind::RealList:
    case Kind::StringList: {
      Json a = Json::array();
      std::size_t start = 0;
      while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, comma - start);
        if (p.kind == Kind::RealList)
          a.push_back(parse_number(p.key, item));
        else
          a.push_back(item);
        start = comma + 1;
      }
      return a;
    }
  }
  return nullptr;
}

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config;
  std::string out = "runs";
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::string positional_fields;
};

int run(const std::string& name, const Subcommand& sc) {
  Json file_config;
  std::filesystem::path base = std::filesystem::current_path();
  if (!sc.config.empty()) {
    const std::filesystem::path path(sc.config);
    if (!std::filesystem::is_regular_file(path)) throw ConfigError("config file not found: " + sc.config);
    try {
      file_config = Json::parse(io::read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    base = std::filesystem::absolute(path).parent_path();
  }
  Json flags = Json::object();
  for (const auto& p : schema(name)) {
    if (const auto it = sc.values.find(p.key); it != sc.values.end()) flags[p.key] = flag_value(p, it->second);
    if (const auto it = sc.flags.find(p.key); it != sc.flags.end() && it->second) flags[p.key] = true;
  }
  if (!sc.positional_fields.empty()) {
    flags["fields"] = std::filesystem::absolute(sc.positional_fields).string();
  } else if (flags.contains("fields")) {
    flags["fields"] = std::filesystem::absolute(flags["fields"].get<std::string>()).string();
  }
  const Json config = resolve(name, file_config, flags);
  std::cout << config.dump(2) << std::endl;

  Artifacts out(sc.out, config);
  const Json summary = run_experiment(config, base, out);
  std::cerr << name << ": " << summary.dump() << "\n" << "artifacts in " << out.dir().string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"roughkit: rough-path and fractional Brownian motion experiments"};
  app.require_subcommand(0, 1);
  bool schema_md = false;
  app.add_flag("--schema-markdown", schema_md, "print the configuration reference as Markdown and exit");

  std::map<std::string, Subcommand> subs;
  for (const auto& name : experiment_names()) {
    Subcommand& sc = subs[name];
    sc.app = app.add_subcommand(name, "run the " + name + " experiment");
    sc.app->add_option("--config", sc.config, "JSON configuration file");
    sc.app->add_option("--out", sc.out, "root directory for artifacts")->capture_default_str();
    for (const auto& p : schema(name)) {
      if (p.kind == Kind::Boolean) {
        sc.app->add_flag(flag_name(p.key), sc.flags[p.key], p.help);
      } else {
        sc.app->add_option(flag_name(p.key), sc.values[p.key], p.help);
      }
    }
    if (name == "check-fields") sc.app->add_option("fields_file", sc.positional_fields, "vector-field file");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (schema_md) {
    std::cout << schema_markdown();
    return 0;
  }
  for (auto& [name, sc] : subs) {
    if (!sc.app->parsed()) continue;
    // Unset options must stay absent from the flag config.
    for (auto it = sc.values.begin(); it != sc.values.end();)
      it = sc.app->count(flag_name(it->first)) ? std::next(it) : sc.values.erase(it);
    try {
      return run(name, sc);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const ParseError& e) {
      std::cerr << "fields file error: " << e.what() << "\n";
      return 2;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const HypothesisError& e) {
      std::cerr << "refused: " << e.what() << "\n";
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 3;
    }
  }
  std::cout << app.help();
  return 2;
}
