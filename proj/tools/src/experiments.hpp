#pragma once

#include "artifacts.hpp"
#include "schema.hpp"

#include <filesystem>
#include <string>

namespace roughkit::cli {

/// Runs one experiment on a resolved config and adds its files to `out`.
/// Relative file paths in the config are taken relative to `base_dir`.
/// Returns a short summary for the terminal.
Json run_experiment(const Json& config, const std::filesystem::path& base_dir, Artifacts& out);

}  // namespace roughkit::cli
