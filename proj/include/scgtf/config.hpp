#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scgtf/eval.hpp"
#include "scgtf/io.hpp"

namespace scgtf {

// Everything a CLI run needs. Built as preset defaults, then a JSON config
// file, then command-line flags, each layer overriding the previous one.
struct RunConfig {
  MethodConfigs methods{preset_configs("x1")};
  std::vector<TfdMethod> method_set{TfdMethod::stft, TfdMethod::pct, TfdMethod::wvd, TfdMethod::spwvd};
  std::filesystem::path out_dir{"."};
  bool write_heatmap{false};
  HeatmapScale heatmap_scale{HeatmapScale::linear};
  std::uint64_t seed{1};
  double snr{10.0};
  SnrScale snr_scale{SnrScale::linear};
  bool literal_envelope{false};
};

// Reads the "preset" key of a config document, if any.
std::optional<std::string> config_preset(const std::string& json_text);

// Overlays a JSON config document onto cfg. Unknown keys and wrongly typed
// values raise ValidationError.
void apply_config_json(const std::string& json_text, RunConfig& cfg);

// "lo:hi" -> Band; throws ValidationError on malformed input.
Band parse_band(const std::string& text);

// Comma-separated method names -> method list (duplicates removed, order kept).
std::vector<TfdMethod> parse_method_list(const std::string& text);

}  // namespace scgtf
