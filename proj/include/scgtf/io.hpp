#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scgtf/signal.hpp"
#include "scgtf/tfd.hpp"

namespace scgtf {

// CSV with header `time_s,amplitude`. The rate is inferred from the time
// column, which must be uniform; it is snapped to the nearest integer Hz when
// within 1 ppm.
SampledSignal read_signal_csv(const std::filesystem::path& path);
std::string signal_csv(const SampledSignal& x);

enum class WavSampleFormat { pcm16, float32 };

// Mono little-endian WAV, 16-bit PCM (scaled to [-1, 1)) or 32-bit float.
SampledSignal read_wav(const std::filesystem::path& path);
std::vector<std::uint8_t> wav_bytes(const SampledSignal& x, WavSampleFormat fmt = WavSampleFormat::float32);

// Dispatches on the extension (.csv or .wav).
SampledSignal read_signal(const std::filesystem::path& path);

// Grid as CSV: first row holds the frequency axis, first column the time axis.
std::string grid_csv(const TfdGrid& g);

enum class HeatmapScale { linear, decibel };

struct Heatmap {
  std::vector<std::uint8_t> pgm;  // binary P5
  std::string mapping;            // e.g. "linear", "db(-60)", "signed-linear"
};

// 8-bit grayscale, one column per time frame, highest frequency in the top
// row. WVD-family grids use a signed scale symmetric about mid-gray.
Heatmap render_heatmap(const TfdGrid& g, HeatmapScale scale);

// JSON sidecar describing how a grid was made.
std::string grid_meta_json(const TfdGrid& g, const std::string& heatmap_mapping = "");

// Writes through a temporary file and renames, so readers never see a
// truncated file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& contents);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace scgtf
