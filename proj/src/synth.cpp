#include "scgtf/synth.hpp"

#include <cmath>
#include <numbers>

#include "scgtf/error.hpp"

namespace scgtf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBurstRateHz = 7.0;
constexpr double kLiteralReference = 0.75;

struct Burst {
  double start;
  double end;
};
constexpr Burst kBursts[] = {{0.25, 0.40}, {0.70, 0.83}};

std::size_t grid_length(double rate, double duration) {
  if (!(rate >= 160.0) || !std::isfinite(rate)) {
    throw InvalidArgument("synthetic signals need sample_rate_hz >= 160 (40 Hz tone would alias)");
  }
  if (!(duration >= 1.0) || !std::isfinite(duration)) {
    throw InvalidArgument("synthetic signals need duration_s >= 1");
  }
  return static_cast<std::size_t>(std::llround(rate * duration));
}

SyntheticComponent make_component(std::string name, std::size_t n) {
  SyntheticComponent c;
  c.name = std::move(name);
  c.waveform.assign(n, 0.0);
  c.phase_rad.assign(n, 0.0);
  c.true_if.times_s.resize(n);
  c.true_if.freqs_hz.assign(n, 0.0);
  c.true_if.valid.assign(n, false);
  return c;
}

SampledSignal sum_components(const std::vector<SyntheticComponent>& comps, double rate, std::size_t n) {
  SampledSignal s{std::vector<double>(n, 0.0), rate, 0.0};
  for (const auto& c : comps) {
    for (std::size_t i = 0; i < n; ++i) s.samples[i] += c.waveform[i];
  }
  return s;
}

}  // namespace

double EnvelopeSegment::value(double t) const {
  if (!contains(t) || form == Form::zero) return 0.0;
  return peak * (0.5 - 0.5 * std::cos(kTwoPi * rate_hz * (t - t_ref_s)));
}

double envelope_value(const Envelope& env, double t) {
  for (const auto& seg : env) {
    if (seg.contains(t)) return seg.value(t);
  }
  return 0.0;
}

Envelope burst_envelope(double first_peak, double second_peak, bool literal_reference) {
  using Form = EnvelopeSegment::Form;
  auto ref = [&](double onset) { return literal_reference ? kLiteralReference : onset; };
  return {
      {0.0, 0.25, Form::zero, 0.0, 0.0, 0.0},
      {0.25, 0.40, Form::raised_cosine, first_peak, kBurstRateHz, ref(0.25)},
      {0.40, 0.70, Form::zero, 0.0, 0.0, 0.0},
      {0.70, 0.83, Form::raised_cosine, second_peak, kBurstRateHz, ref(0.70)},
      {0.83, 1.00, Form::zero, 0.0, 0.0, 0.0},
  };
}

std::vector<IFTrajectory> SyntheticSignal::true_ifs() const {
  std::vector<IFTrajectory> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.true_if);
  return out;
}

std::vector<std::vector<bool>> SyntheticSignal::component_masks() const {
  std::vector<std::vector<bool>> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.true_if.valid);
  return out;
}

double x2_chirp_if(double tau) { return 2610.0 * tau * tau - 430.0 * tau + 20.0; }

double x2_chirp_phase(double tau) { return kTwoPi * (870.0 * tau * tau - 215.0 * tau + 20.0) * tau; }

SyntheticSignal gen_x1(double rate, double duration, const X1Options& opt) {
  const std::size_t n = grid_length(rate, duration);
  const Envelope env = burst_envelope(opt.first_peak, opt.second_peak, opt.literal_reference);

  auto low = make_component("tone_20hz", n);
  auto high = make_component("tone_40hz", n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double a = envelope_value(env, t);
    low.true_if.times_s[i] = high.true_if.times_s[i] = t;
    low.phase_rad[i] = kTwoPi * 20.0 * t + opt.phase_20_rad;
    high.phase_rad[i] = kTwoPi * 40.0 * t + opt.phase_40_rad;
    low.waveform[i] = -a * std::sin(low.phase_rad[i]);
    high.waveform[i] = opt.second_tone_gain * a * std::sin(high.phase_rad[i]);
    if (a > 0.0) {
      low.true_if.valid[i] = high.true_if.valid[i] = true;
      low.true_if.freqs_hz[i] = 20.0;
      high.true_if.freqs_hz[i] = 40.0;
    }
  }

  SyntheticSignal sig;
  sig.id = "x1";
  sig.components = {std::move(low), std::move(high)};
  sig.clean = sum_components(sig.components, rate, n);
  sig.signal = sig.clean;
  sig.dominant_component = 0;
  return sig;
}

SyntheticSignal gen_x2(double rate, double duration, double snr, std::uint64_t seed, const X2Options& opt) {
  const std::size_t n = grid_length(rate, duration);
  if (!(snr > 0.0) && opt.snr_scale == SnrScale::linear) throw InvalidArgument("snr must be positive");
  const Envelope env = burst_envelope(opt.first_peak, opt.second_peak, opt.literal_reference);

  auto tone = make_component("tone_40hz", n);
  auto chirp = make_component("chirp", n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double a = envelope_value(env, t);
    tone.true_if.times_s[i] = chirp.true_if.times_s[i] = t;
    tone.phase_rad[i] = kTwoPi * 40.0 * t;
    tone.waveform[i] = opt.tone_weight * a * std::sin(tone.phase_rad[i]);
    if (a > 0.0) {
      tone.true_if.valid[i] = true;
      tone.true_if.freqs_hz[i] = 40.0;
    }
    for (const auto& b : kBursts) {
      if (t > b.start && t <= b.end) {
        const double tau = t - b.start;
        chirp.phase_rad[i] = x2_chirp_phase(tau);
        chirp.waveform[i] = a * std::sin(chirp.phase_rad[i]);
        if (a > 0.0) {
          chirp.true_if.valid[i] = true;
          chirp.true_if.freqs_hz[i] = x2_chirp_if(tau);
        }
      }
    }
  }

  SyntheticSignal sig;
  sig.id = "x2";
  sig.components = {std::move(tone), std::move(chirp)};
  sig.clean = sum_components(sig.components, rate, n);
  sig.signal = std::isinf(snr) ? sig.clean : add_white_noise(sig.clean, snr, seed, opt.snr_scale);
  sig.dominant_component = 1;
  return sig;
}

IFTrajectory true_if(const SyntheticSignal& sig, std::size_t component) {
  if (component >= sig.components.size()) {
    throw InvalidArgument("component index " + std::to_string(component) + " out of range");
  }
  return sig.components[component].true_if;
}

}  // namespace scgtf
