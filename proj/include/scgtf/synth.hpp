#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "scgtf/if_trajectory.hpp"
#include "scgtf/signal.hpp"

namespace scgtf {

// One piece of a piecewise amplitude envelope, active on (t_start_s, t_end_s].
struct EnvelopeSegment {
  enum class Form { zero, raised_cosine };

  double t_start_s{0.0};
  double t_end_s{0.0};
  Form form{Form::zero};
  double peak{0.0};
  double rate_hz{0.0};
  double t_ref_s{0.0};

  bool contains(double t) const { return t > t_start_s && t <= t_end_s; }
  // peak * (0.5 - 0.5 cos(2 pi rate (t - t_ref))) inside the segment, else 0.
  double value(double t) const;
};

using Envelope = std::vector<EnvelopeSegment>;

double envelope_value(const Envelope& env, double t);

// Two raised-cosine bursts on (0.25, 0.40] and (0.70, 0.83] with the given
// peaks. Bursts rise from zero at their own onset unless literal_reference is
// set, which uses the printed t_ref = 0.75 for both.
Envelope burst_envelope(double first_peak, double second_peak, bool literal_reference);

struct SyntheticComponent {
  std::string name;
  std::vector<double> waveform;  // noiseless contribution of this component
  std::vector<double> phase_rad;  // argument of the sinusoid, zero off-support
  IFTrajectory true_if;           // masked to the component's active support
};

struct SyntheticSignal {
  std::string id;
  SampledSignal signal;  // what the analysis sees (noise included for x2)
  SampledSignal clean;   // sum of component waveforms
  std::vector<SyntheticComponent> components;
  std::size_t dominant_component{0};

  std::vector<IFTrajectory> true_ifs() const;
  std::vector<std::vector<bool>> component_masks() const;
};

struct X1Options {
  double first_peak{1.0};
  double second_peak{0.9};
  double second_tone_gain{0.9};
  double phase_20_rad{94.0};
  double phase_40_rad{188.0};
  bool literal_reference{false};
};

struct X2Options {
  double first_peak{1.0};
  double second_peak{0.5};
  double tone_weight{-0.5};
  bool literal_reference{false};
  SnrScale snr_scale{SnrScale::linear};
};

// Two constant tones (20 Hz, 40 Hz) sharing a two-burst envelope.
SyntheticSignal gen_x1(double sample_rate_hz = 320.0, double duration_s = 1.0,
                       const X1Options& opt = {});

// 40 Hz tone plus a quadratic-IF chirp restarting at each burst onset, with
// white noise at `snr`. Pass snr = +infinity for the noiseless signal.
SyntheticSignal gen_x2(double sample_rate_hz = 320.0, double duration_s = 1.0, double snr = 10.0,
                       std::uint64_t seed = 1, const X2Options& opt = {});

// IF of the x2 chirp at local burst time tau (s).
double x2_chirp_if(double tau_s);
// Phase (rad) of the x2 chirp at local burst time tau (s).
double x2_chirp_phase(double tau_s);

IFTrajectory true_if(const SyntheticSignal& sig, std::size_t component);

}  // namespace scgtf
