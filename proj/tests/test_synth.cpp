#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <spikedet/errors.hpp>
#include <spikedet/mimetic.hpp>
#include <spikedet/synth.hpp>

#include <cmath>
#include <map>
#include <string>
#include <vector>

using namespace spikedet;

namespace {

SynthSpec spiky_spec() {
  SynthSpec spec;
  spec.name = "unit";
  spec.fs = 200.0;
  spec.duration_s = 120.0;
  spec.channels = 2;
  spec.seed = 77;
  spec.background.noise_std_uv = 10.0;
  EventSpec ev;
  ev.template_name = "spike";
  ev.rate_per_min = 5.0;
  ev.amp_uv_min = 100.0;
  ev.amp_uv_max = 200.0;
  ev.dur_ms_min = 30.0;
  ev.dur_ms_max = 60.0;
  spec.events.push_back(ev);
  return spec;
}

}  // namespace

TEST_CASE("generation is a pure function of the spec") {
  SynthSpec spec = spiky_spec();
  auto [rec1, ann1] = generate(spec);
  auto [rec2, ann2] = generate(spec);

  REQUIRE(rec1.channels.size() == 2);
  CHECK(rec1.fs == 200.0);
  CHECK(rec1.channels[0].samples.size() == 24000);
  CHECK(rec1.channels[0].label == "Fp1");
  CHECK(rec1.channels[1].label == "Fp2");

  for (size_t c = 0; c < rec1.channels.size(); ++c) {
    REQUIRE(rec1.channels[c].samples.size() == rec2.channels[c].samples.size());
    CHECK((rec1.channels[c].samples.array() == rec2.channels[c].samples.array()).all());
  }
  REQUIRE(ann1.marks.size() == ann2.marks.size());
  for (size_t i = 0; i < ann1.marks.size(); ++i) {
    CHECK(ann1.marks[i].channel == ann2.marks[i].channel);
    CHECK(ann1.marks[i].time_s == ann2.marks[i].time_s);
    CHECK(ann1.marks[i].kind == ann2.marks[i].kind);
  }

  spec.seed = 78;
  auto [rec3, ann3] = generate(spec);
  CHECK((rec1.channels[0].samples.array() != rec3.channels[0].samples.array()).any());
}

TEST_CASE("event counts follow the requested rate exactly") {
  SynthSpec spec = spiky_spec();
  auto [rec, ann] = generate(spec);
  // 5 per minute over 120 s
  CHECK(ann.marks.size() == 10);
  for (const Mark& m : ann.marks) {
    CHECK(m.kind == "spike");
    CHECK(m.time_s >= 1.0);
    CHECK(m.time_s <= spec.duration_s - 1.0);
  }

  SUBCASE("no events means no annotations") {
    spec.events.clear();
    auto [rec0, ann0] = generate(spec);
    CHECK(ann0.marks.empty());
    CHECK(rec0.channels[0].samples.size() == 24000);
  }
  SUBCASE("artifact mimics are injected but never annotated") {
    spec.events[0].template_name = "emg_burst";
    spec.events[0].dur_ms_min = 100.0;
    spec.events[0].dur_ms_max = 300.0;
    auto [recA, annA] = generate(spec);
    CHECK(annA.marks.empty());
    bool differs = false;
    SynthSpec quiet = spec;
    quiet.events.clear();
    auto [recQ, annQ] = generate(quiet);
    for (size_t c = 0; c < recA.channels.size() && !differs; ++c)
      differs = (recA.channels[c].samples.array() != recQ.channels[c].samples.array()).any();
    CHECK(differs);
  }
}

TEST_CASE("marks on one channel keep their distance") {
  SynthSpec spec = spiky_spec();
  spec.duration_s = 600.0;
  spec.events[0].rate_per_min = 30.0;  // 300 marks over 2 channels
  auto [rec, ann] = generate(spec);
  REQUIRE(ann.marks.size() == 300);

  std::map<std::string, std::vector<double>> per_channel;
  for (const Mark& m : ann.marks) per_channel[m.channel].push_back(m.time_s);
  for (auto& [ch, times] : per_channel) {
    for (size_t i = 1; i < times.size(); ++i) {
      CHECK(times[i] >= times[i - 1]);  // annotation output is sorted
      CHECK(times[i] - times[i - 1] >= 0.3 - 1e-9);
    }
  }
}

TEST_CASE("impossible specs are refused") {
  SynthSpec spec = spiky_spec();

  SUBCASE("spike durations live in a narrow band") {
    spec.events[0].dur_ms_min = 10.0;
    CHECK_THROWS_AS(generate(spec), SpecError);
    spec.events[0].dur_ms_min = 30.0;
    spec.events[0].dur_ms_max = 80.0;
    CHECK_THROWS_AS(generate(spec), SpecError);
  }
  SUBCASE("sharp waves have their own band") {
    spec.events[0].template_name = "sharp";
    CHECK_THROWS_AS(generate(spec), SpecError);  // 30-60 ms is spike territory
    spec.events[0].dur_ms_min = 80.0;
    spec.events[0].dur_ms_max = 150.0;
    CHECK_NOTHROW(generate(spec));
  }
  SUBCASE("unknown template") {
    spec.events[0].template_name = "triphasic";
    CHECK_THROWS_AS(generate(spec), SpecError);
  }
  SUBCASE("degenerate geometry") {
    spec.fs = 0.0;
    CHECK_THROWS_AS(generate(spec), SpecError);
  }
  SUBCASE("more events than the spacing rule can hold") {
    spec.duration_s = 10.0;
    spec.channels = 1;
    spec.events[0].rate_per_min = 600.0;
    CHECK_THROWS_AS(generate(spec), SpecError);
  }
  SUBCASE("inverted ranges") {
    spec.events[0].amp_uv_min = 200.0;
    spec.events[0].amp_uv_max = 100.0;
    CHECK_THROWS_AS(generate(spec), SpecError);
  }
}

TEST_CASE("injected spikes measure back close to their parameters") {
  SynthSpec spec;
  spec.fs = 500.0;
  spec.duration_s = 30.0;
  spec.channels = 1;
  spec.seed = 99;
  spec.background.noise_std_uv = 0.0;  // clean background
  EventSpec ev;
  ev.template_name = "spike";
  ev.rate_per_min = 4.0;
  ev.amp_uv_min = 150.0;
  ev.amp_uv_max = 150.0;
  ev.dur_ms_min = 60.0;
  ev.dur_ms_max = 60.0;
  spec.events.push_back(ev);

  auto [rec, ann] = generate(spec);
  REQUIRE(ann.marks.size() == 2);
  for (const Mark& m : ann.marks) {
    REQUIRE(m.channel == rec.channels[0].label);
    auto peak = static_cast<int64_t>(std::llround(m.time_s * spec.fs));
    HalfWavePair pair = decompose_halfwaves(rec.channels[0].samples, spec.fs, peak);
    FeatureVector f = extract_features(pair, rec.channels[0].samples, spec.fs);
    CHECK(f.amp1_uv == doctest::Approx(150.0).epsilon(0.10));
    CHECK(f.dur1_ms == doctest::Approx(60.0).epsilon(0.10));
    CHECK(f.amp2_uv == doctest::Approx(157.5).epsilon(0.10));  // 5% undershoot
    CHECK(pair.positive);
  }
}

TEST_CASE("spec files") {
  const std::string text = R"({
    "name": "demo",
    "fs": 250,
    "duration_s": 40,
    "channels": 3,
    "seed": 5,
    "background": {"noise_std_uv": 8, "alpha_amp_uv": 20, "alpha_freq_hz": 10},
    "events": [
      {"template": "spike", "rate_per_min": 6, "amp_uv": [90, 180], "dur_ms": [25, 65]}
    ]
  })";
  SynthSpec spec = parse_synth_spec(text, "demo.json");
  CHECK(spec.name == "demo");
  CHECK(spec.fs == 250.0);
  CHECK(spec.duration_s == 40.0);
  CHECK(spec.channels == 3);
  CHECK(spec.seed == 5);
  CHECK(spec.background.noise_std_uv == 8.0);
  CHECK(spec.background.alpha_amp_uv == 20.0);
  REQUIRE(spec.events.size() == 1);
  CHECK(spec.events[0].template_name == "spike");
  CHECK(spec.events[0].rate_per_min == 6.0);
  CHECK(spec.events[0].amp_uv_min == 90.0);
  CHECK(spec.events[0].dur_ms_max == 65.0);

  CHECK_THROWS_AS(parse_synth_spec("not json at all"), SpecError);
  CHECK_THROWS_AS(parse_synth_spec(R"({"fss": 200})"), SpecError);
  CHECK_THROWS_AS(parse_synth_spec(R"({"background": {"hum_hz": 50}})"), SpecError);
  CHECK_THROWS_AS(
      parse_synth_spec(
          R"({"events": [{"template": "spike", "rate_per_min": 1, "amp_uv": [50, 100]}]})"),
      SpecError);  // dur_ms missing
  CHECK_THROWS_AS(
      parse_synth_spec(
          R"({"events": [{"template": "spike", "rate_per_min": 1, "amp_uv": 100, "dur_ms": [30, 50]}]})"),
      SpecError);  // amp_uv must be a pair
  CHECK_THROWS_AS(load_synth_spec("/no/such/spec.json"), IoError);
}

TEST_CASE("bundled corpora") {
  std::vector<SynthSpec> corpus = default_corpus();
  REQUIRE(corpus.size() == 3);
  CHECK(corpus[0].name == "corpus-0");
  CHECK(corpus[1].name == "corpus-1");
  CHECK(corpus[2].name == "corpus-2");
  CHECK(corpus[0].seed != corpus[1].seed);
  CHECK(corpus[1].seed != corpus[2].seed);
  CHECK(corpus[0].fs == 200.0);
  CHECK(corpus[0].duration_s == 4800.0);
  CHECK(corpus[0].channels == 8);
  for (const SynthSpec& s : corpus) {
    bool has_annotated = false;
    for (const EventSpec& ev : s.events)
      has_annotated |= ev.template_name == "spike" || ev.template_name == "sharp";
    CHECK(has_annotated);
  }
}
