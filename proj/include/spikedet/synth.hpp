#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spikedet/types.hpp"

namespace spikedet {

struct EventSpec {
  std::string template_name;  // spike, sharp, k_complex, emg_burst, eog_ramp
  double rate_per_min = 0.0;
  double amp_uv_min = 0.0, amp_uv_max = 0.0;
  double dur_ms_min = 0.0, dur_ms_max = 0.0;
};

struct BackgroundSpec {
  double noise_exponent = 1.0;  // 1/f^alpha spectral shaping
  double noise_std_uv = 15.0;
  double alpha_amp_uv = 0.0;  // 0 disables the alpha rhythm
  double alpha_freq_hz = 10.0;
};

struct SynthSpec {
  std::string name = "synthetic";
  double fs = 200.0;
  double duration_s = 60.0;
  int channels = 1;
  uint64_t seed = 1;
  BackgroundSpec background;
  std::vector<EventSpec> events;
};

// Seed-deterministic recording plus ground truth. Spike and sharp injections
// are annotated with their template name; artifact mimics are not. Events on
// one channel keep >= 300 ms spacing.
std::pair<Recording, AnnotationSet> generate(const SynthSpec& spec);

// JSON spec file (see README for the schema).
SynthSpec load_synth_spec(const std::string& path);
SynthSpec parse_synth_spec(const std::string& text, const std::string& origin = "<string>");

// Three fixed corpora (easy / medium / hard SNR) at roughly 80 minutes x
// 200 Hz x 8 channels, a few hundred annotated events each.
std::vector<SynthSpec> default_corpus();

}  // namespace spikedet
