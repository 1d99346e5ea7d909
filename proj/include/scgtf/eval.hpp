#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scgtf/if_trajectory.hpp"
#include "scgtf/pct.hpp"
#include "scgtf/tfd.hpp"

namespace scgtf {

// Per-frame argmax frequency inside `band` (|value| for WVD-family grids).
// Frames whose band maximum falls below amp_threshold_frac times the largest
// band maximum of the grid are marked invalid; an all-zero grid yields no
// valid frames.
IFTrajectory extract_ridge(const TfdGrid& g, std::optional<Band> band = std::nullopt,
                           double amp_threshold_frac = 0.05);

// Root-mean-square difference over indices valid in both trajectories.
// Throws InvalidArgument on mismatched time grids and InsufficientData when
// the masks are disjoint.
double rmse(const IFTrajectory& actual, const IFTrajectory& estimated);

// rmse divided by the mean of `actual` over the jointly valid indices.
double nrmse(const IFTrajectory& actual, const IFTrajectory& estimated);

// Frequency of the largest PSD value inside `band`.
double dominant_frequency(const TfdGrid& g, std::optional<Band> band = std::nullopt);

// Nearest-neighbour lookup of `truth` at each of `times_s`.
IFTrajectory resample_nearest(const IFTrajectory& truth, const std::vector<double>& times_s);

enum class Scoring {
  nearest,   // each frame scored against the truth component closest in frequency
  dominant,  // every frame scored against one designated component
};

const char* to_string(Scoring s);
Scoring scoring_from_string(const std::string& name);

// Builds the reference trajectory a ridge is scored against. `truths` must
// already share the ridge's time grid.
IFTrajectory match_truth(const IFTrajectory& estimated, const std::vector<IFTrajectory>& truths,
                         Scoring scoring, std::size_t dominant_component);

struct MethodConfigs {
  StftConfig stft;
  WvdConfig wvd;
  WindowSpec pwvd_lag_window{WindowSpec::hann(63)};
  SpwvdConfig spwvd;
  PctConfig pct;
  std::optional<Band> ridge_band_hz{Band{5.0, 70.0}};
  double amp_threshold_frac{0.05};
  std::optional<Band> dominant_band_hz{Band{1.0, 70.0}};
  Scoring scoring{Scoring::nearest};
  std::size_t dominant_component{0};
};

// Defaults tuned to the two synthetic signals; they differ only in the STFT
// FFT length (512 for x1, 128 for x2).
MethodConfigs preset_configs(const std::string& name);

// Runs one transform on a real signal with the given configuration.
TfdGrid run_method(const SampledSignal& x, TfdMethod method, const MethodConfigs& cfg);

struct MethodResult {
  TfdMethod method{TfdMethod::stft};
  bool ok{false};
  std::string error;
  std::optional<double> nrmse;
  std::optional<std::size_t> scored_frames;
  double dominant_freq_hz{0.0};
  ResolutionReport resolution;
  TfdMeta meta;
};

struct ComparisonReport {
  std::string signal_id;
  Scoring scoring{Scoring::nearest};
  std::vector<MethodResult> entries;

  const MethodResult* find(TfdMethod m) const;
  std::string to_json() const;
  std::string to_text() const;
};

// Transforms, ridges and scores each method. Per-method failures are recorded
// in the entry rather than thrown. Throws InvalidArgument for an empty method
// list and ValidationError when a truth trajectory does not match x's length.
ComparisonReport compare_methods(const SampledSignal& x,
                                 const std::optional<std::vector<IFTrajectory>>& truth,
                                 const std::vector<TfdMethod>& methods,
                                 const MethodConfigs& cfg = {}, const std::string& signal_id = "");

}  // namespace scgtf
