#include "spikedet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>
#include <unsupported/Eigen/FFT>

#include "spikedet/errors.hpp"

namespace spikedet {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMinSpacingS = 0.300;
constexpr double kPlacementMarginS = 1.5;

// RNG helpers with pinned arithmetic so output bytes do not depend on the
// standard library's distribution implementations.
double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * u01(rng); }

int uniform_int(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<uint64_t>(n));
}

struct Gauss {
  std::mt19937_64& rng;
  bool has_spare = false;
  double spare = 0.0;

  double operator()() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    double u1;
    do {
      u1 = u01(rng);
    } while (u1 <= 0.0);
    double u2 = u01(rng);
    double r = std::sqrt(-2.0 * std::log(u1));
    spare = r * std::sin(2.0 * kPi * u2);
    has_spare = true;
    return r * std::cos(2.0 * kPi * u2);
  }
};

std::mt19937_64 seeded(uint64_t seed, uint32_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed & 0xFFFFFFFFu),
                    static_cast<uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

Eigen::VectorXd shaped_noise(std::mt19937_64& rng, int64_t n, double exponent, double std_uv,
                             double fs) {
  Eigen::VectorXd x(n);
  Gauss gauss{rng};
  for (int64_t i = 0; i < n; ++i) x[i] = gauss();
  if (std_uv <= 0.0) return Eigen::VectorXd::Zero(n);
  if (exponent != 0.0) {
    Eigen::FFT<double> fft;
    Eigen::VectorXcd spectrum;
    fft.fwd(spectrum, x);
    spectrum[0] = 0.0;
    for (int64_t k = 1; k < n; ++k) {
      double f = static_cast<double>(std::min(k, n - k)) * fs / static_cast<double>(n);
      spectrum[k] *= std::pow(f, -exponent / 2.0);
    }
    fft.inv(x, spectrum);
  }
  double mean = x.mean();
  double sd = std::sqrt((x.array() - mean).square().sum() / static_cast<double>(n));
  if (sd > 0.0) x = (x.array() - mean) * (std_uv / sd);
  return x;
}

struct Placed {
  int channel = 0;
  double peak_s = 0.0;
  double amp_uv = 0.0;
  double dur_s = 0.0;
  std::string template_name;
  bool annotated = false;
};

// Pulse shapes are piecewise raised cosines, so flanks are smooth and the
// turning points land at the parameterized boundaries.
double half_cos_rise(double phase) { return 0.5 * (1.0 - std::cos(kPi * phase)); }

void add_pulse(Signal& x, double fs, double peak_s, double amp, double dur_s, double rise_frac,
               double undershoot_frac, double recovery_frac) {
  const double rise = rise_frac * dur_s;
  const double fall = dur_s - rise;
  const double recovery = recovery_frac * dur_s;
  const double t0 = peak_s - rise;
  const auto first = static_cast<int64_t>(std::ceil(t0 * fs));
  const auto last = static_cast<int64_t>(std::floor((t0 + dur_s + recovery) * fs));
  const double u = undershoot_frac * amp;
  for (int64_t i = std::max<int64_t>(0, first); i <= std::min<int64_t>(x.size() - 1, last); ++i) {
    double t = static_cast<double>(i) / fs - t0;
    double v;
    if (t < rise)
      v = amp * half_cos_rise(t / rise);
    else if (t < dur_s)
      v = amp - (amp + u) * half_cos_rise((t - rise) / fall);
    else if (recovery > 0.0)
      v = -u + u * half_cos_rise((t - dur_s) / recovery);
    else
      v = 0.0;
    x[i] += v;
  }
}

void add_burst(Signal& x, double fs, double peak_s, double amp, double dur_s, double carrier_hz) {
  const double t0 = peak_s - dur_s / 2.0;
  const auto first = static_cast<int64_t>(std::ceil(t0 * fs));
  const auto last = static_cast<int64_t>(std::floor((t0 + dur_s) * fs));
  for (int64_t i = std::max<int64_t>(0, first); i <= std::min<int64_t>(x.size() - 1, last); ++i) {
    double t = static_cast<double>(i) / fs - t0;
    double hann = 0.5 * (1.0 - std::cos(2.0 * kPi * t / dur_s));
    x[i] += amp * hann * std::sin(2.0 * kPi * carrier_hz * (t - dur_s / 2.0));
  }
}

void inject(Signal& x, double fs, const Placed& p) {
  if (p.template_name == "spike" || p.template_name == "sharp")
    add_pulse(x, fs, p.peak_s, p.amp_uv, p.dur_s, 0.35, 0.05, 0.6);
  else if (p.template_name == "k_complex")
    add_pulse(x, fs, p.peak_s, p.amp_uv, p.dur_s, 0.5, 0.9, 0.6);
  else if (p.template_name == "eog_ramp")
    add_pulse(x, fs, p.peak_s, p.amp_uv, p.dur_s, 0.3, 0.0, 0.5);
  else if (p.template_name == "emg_burst")
    add_burst(x, fs, p.peak_s, p.amp_uv, p.dur_s, 50.0);
}

const char* const kMontage[] = {"Fp1", "Fp2", "F3", "F4", "C3", "C4", "P3", "P4",
                                "O1",  "O2",  "F7", "F8", "T3", "T4", "T5", "T6"};

std::string channel_label(int index) {
  if (index < static_cast<int>(std::size(kMontage))) return kMontage[index];
  return "CH" + std::to_string(index + 1);
}

void validate(const SynthSpec& spec) {
  if (spec.fs <= 0) throw SpecError("fs must be positive");
  if (spec.duration_s <= 0) throw SpecError("duration_s must be positive");
  if (spec.channels < 1) throw SpecError("channels must be >= 1");
  const BackgroundSpec& bg = spec.background;
  if (bg.noise_exponent < 0 || bg.noise_exponent > 3)
    throw SpecError("noise_exponent must be in [0,3]");
  if (bg.noise_std_uv < 0) throw SpecError("noise_std_uv must be >= 0");
  if (bg.alpha_amp_uv < 0) throw SpecError("alpha_amp_uv must be >= 0");
  if (bg.alpha_amp_uv > 0 && (bg.alpha_freq_hz <= 0 || bg.alpha_freq_hz >= spec.fs / 2))
    throw SpecError("alpha_freq_hz must lie in (0, fs/2)");
  for (const EventSpec& ev : spec.events) {
    if (ev.rate_per_min < 0) throw SpecError(ev.template_name + ": rate_per_min must be >= 0");
    if (!(ev.amp_uv_min > 0) || ev.amp_uv_max < ev.amp_uv_min)
      throw SpecError(ev.template_name + ": bad amplitude range");
    if (!(ev.dur_ms_min > 0) || ev.dur_ms_max < ev.dur_ms_min)
      throw SpecError(ev.template_name + ": bad duration range");
    if (ev.template_name == "spike") {
      if (ev.dur_ms_min < 20 || ev.dur_ms_max > 70)
        throw SpecError("spike durations must lie within 20-70 ms");
    } else if (ev.template_name == "sharp") {
      if (ev.dur_ms_min < 70 || ev.dur_ms_max > 200)
        throw SpecError("sharp durations must lie within 70-200 ms");
    } else if (ev.template_name != "k_complex" && ev.template_name != "emg_burst" &&
               ev.template_name != "eog_ramp") {
      throw SpecError("unknown event template '" + ev.template_name + "'");
    }
  }
  if (spec.duration_s < 2 * kPlacementMarginS + 1 &&
      !spec.events.empty())
    throw SpecError("recording too short to place events");
}

}  // namespace

std::pair<Recording, AnnotationSet> generate(const SynthSpec& spec) {
  validate(spec);

  const auto n = static_cast<int64_t>(std::llround(spec.duration_s * spec.fs));
  Recording rec;
  rec.fs = spec.fs;
  rec.channels.resize(spec.channels);

  for (int c = 0; c < spec.channels; ++c) {
    auto rng = seeded(spec.seed, static_cast<uint32_t>(c));
    Channel& ch = rec.channels[c];
    ch.label = channel_label(c);
    ch.samples = shaped_noise(rng, n, spec.background.noise_exponent,
                              spec.background.noise_std_uv, spec.fs);
    if (spec.background.alpha_amp_uv > 0) {
      double phase = uniform(rng, 0.0, 2.0 * kPi);
      for (int64_t i = 0; i < n; ++i)
        ch.samples[i] += spec.background.alpha_amp_uv *
                         std::sin(2.0 * kPi * spec.background.alpha_freq_hz * i / spec.fs + phase);
    }
  }

  auto master = seeded(spec.seed, 0xFFFFFFFFu);
  std::vector<std::vector<double>> peaks_by_channel(spec.channels);
  std::vector<Placed> placed;
  const double lo = kPlacementMarginS;
  const double hi = spec.duration_s - kPlacementMarginS;
  if (!spec.events.empty() && hi <= lo) throw SpecError("recording too short to place events");

  for (const EventSpec& ev : spec.events) {
    const auto count =
        static_cast<int64_t>(std::llround(ev.rate_per_min * spec.duration_s / 60.0));
    for (int64_t i = 0; i < count; ++i) {
      Placed p;
      p.template_name = ev.template_name;
      p.annotated = ev.template_name == "spike" || ev.template_name == "sharp";
      p.amp_uv = uniform(master, ev.amp_uv_min, ev.amp_uv_max);
      p.dur_s = uniform(master, ev.dur_ms_min, ev.dur_ms_max) / 1000.0;
      bool ok = false;
      for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
        p.channel = uniform_int(master, spec.channels);
        p.peak_s = uniform(master, lo, hi);
        ok = true;
        for (double t : peaks_by_channel[p.channel])
          if (std::abs(t - p.peak_s) < kMinSpacingS) {
            ok = false;
            break;
          }
      }
      if (!ok)
        throw SpecError("event rate too high for the 300 ms spacing constraint (" +
                        ev.template_name + ")");
      peaks_by_channel[p.channel].push_back(p.peak_s);
      placed.push_back(p);
    }
  }

  AnnotationSet ann;
  for (const Placed& p : placed) {
    inject(rec.channels[p.channel].samples, spec.fs, p);
    if (p.annotated) ann.marks.push_back({rec.channels[p.channel].label, p.peak_s,
                                          p.template_name});
  }
  std::sort(ann.marks.begin(), ann.marks.end(), [](const Mark& a, const Mark& b) {
    if (a.channel != b.channel) return a.channel < b.channel;
    return a.time_s < b.time_s;
  });
  return {std::move(rec), std::move(ann)};
}

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) throw SpecError(where + ": unknown key '" + it.key() + "'");
  }
}

}  // namespace

SynthSpec parse_synth_spec(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(origin + ": " + e.what());
  }
  try {
    require_keys(j, {"name", "fs", "duration_s", "channels", "seed", "background", "events"},
                 origin);
    SynthSpec spec;
    spec.name = j.value("name", spec.name);
    spec.fs = j.value("fs", spec.fs);
    spec.duration_s = j.value("duration_s", spec.duration_s);
    spec.channels = j.value("channels", spec.channels);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("background")) {
      const json& bg = j["background"];
      require_keys(bg, {"noise_exponent", "noise_std_uv", "alpha_amp_uv", "alpha_freq_hz"},
                   origin + ": background");
      spec.background.noise_exponent = bg.value("noise_exponent", spec.background.noise_exponent);
      spec.background.noise_std_uv = bg.value("noise_std_uv", spec.background.noise_std_uv);
      spec.background.alpha_amp_uv = bg.value("alpha_amp_uv", spec.background.alpha_amp_uv);
      spec.background.alpha_freq_hz = bg.value("alpha_freq_hz", spec.background.alpha_freq_hz);
    }
    for (const json& ev : j.value("events", json::array())) {
      require_keys(ev, {"template", "rate_per_min", "amp_uv", "dur_ms"}, origin + ": event");
      EventSpec e;
      e.template_name = ev.at("template").get<std::string>();
      e.rate_per_min = ev.at("rate_per_min").get<double>();
      const json& amp = ev.at("amp_uv");
      const json& dur = ev.at("dur_ms");
      if (!amp.is_array() || amp.size() != 2 || !dur.is_array() || dur.size() != 2)
        throw SpecError(origin + ": amp_uv and dur_ms must be [min, max] pairs");
      e.amp_uv_min = amp[0].get<double>();
      e.amp_uv_max = amp[1].get<double>();
      e.dur_ms_min = dur[0].get<double>();
      e.dur_ms_max = dur[1].get<double>();
      spec.events.push_back(std::move(e));
    }
    validate(spec);
    return spec;
  } catch (const json::exception& e) {
    throw SpecError(origin + ": " + e.what());
  }
}

SynthSpec load_synth_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_synth_spec(buf.str(), path);
}

std::vector<SynthSpec> default_corpus() {
  std::vector<SynthSpec> corpus(3);

  SynthSpec& easy = corpus[0];
  easy.name = "corpus-0";
  easy.fs = 200;
  easy.duration_s = 4800;
  easy.channels = 8;
  easy.seed = 101;
  easy.background = {1.0, 12.0, 0.0, 10.0};
  easy.events = {{"spike", 7.5, 120, 300, 25, 65}};

  SynthSpec& medium = corpus[1];
  medium.name = "corpus-1";
  medium.fs = 200;
  medium.duration_s = 4800;
  medium.channels = 8;
  medium.seed = 202;
  medium.background = {1.0, 15.0, 15.0, 10.0};
  medium.events = {
      {"spike", 6.25, 80, 250, 25, 65},   {"sharp", 1.25, 80, 220, 80, 180},
      {"k_complex", 0.5, 100, 250, 550, 700}, {"emg_burst", 0.75, 40, 120, 80, 240},
      {"eog_ramp", 0.75, 60, 180, 230, 330},
  };

  SynthSpec& hard = corpus[2];
  hard.name = "corpus-2";
  hard.fs = 200;
  hard.duration_s = 5100;
  hard.channels = 8;
  hard.seed = 303;
  hard.background = {1.0, 18.0, 25.0, 10.0};
  hard.events = {
      {"spike", 3.55, 60, 180, 22, 60},    {"sharp", 1.0, 60, 160, 75, 190},
      {"k_complex", 0.75, 100, 220, 550, 700}, {"emg_burst", 1.0, 40, 130, 80, 240},
      {"eog_ramp", 1.0, 60, 190, 230, 330},
  };

  return corpus;
}

}  // namespace spikedet
