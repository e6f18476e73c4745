#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "pvinspect/detector.hpp"
#include "pvinspect/pipeline.hpp"

namespace pvinspect::cli {

/// Bad or missing configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Parsed `key = value` lines. Blank lines and lines starting with '#' are
/// skipped.
std::map<std::string, std::string> parse_key_values(const std::string& text);

struct RunConfig {
  pipeline::PipelineConfig pipeline;
  detector::BuiltinConfig panel_detector;
  detector::BuiltinConfig defect_detector;
  std::optional<double> detector_timeout_s;
  std::filesystem::path palette;
  std::uint64_t seed = 0;
  /// Every effective setting, for the run manifest.
  std::map<std::string, std::string> snapshot;
};

/// Builds a run configuration from the file contents. IR runs require
/// calibration.gain and calibration.offset. Unknown keys and malformed values
/// raise ConfigError naming the key.
RunConfig make_run_config(const std::map<std::string, std::string>& values, pipeline::Spectrum spectrum);
RunConfig load_run_config(const std::filesystem::path& path, pipeline::Spectrum spectrum);

}  // namespace pvinspect::cli
