#include "spikedet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "spikedet/errors.hpp"
#include "spikedet/fuzzy.hpp"
#include "spikedet/mimetic.hpp"
#include "spikedet/postclass.hpp"

namespace spikedet {

namespace {

std::vector<ClassifiedEvent> score_channel(const Recording& rec, int channel_index,
                                           const PipelineConfig& cfg,
                                           const FuzzyRuleBase& base) {
  std::vector<ClassifiedEvent> out;
  const Signal& samples = rec.channels[channel_index].samples;
  for (const CandidateEvent& cand : collect_candidates_channel(rec, channel_index, cfg.detector)) {
    ClassifiedEvent ev;
    ev.candidate = cand;
    try {
      HalfWavePair pair = decompose_halfwaves(samples, rec.fs, cand.peak_sample);
      ev.features = extract_features(pair, samples, rec.fs);
    } catch (const DegenerateEventError&) {
      continue;
    }
    ClassifierResult r = classify(ev.features, base, cfg.decision_threshold, cfg.possible_floor);
    ev.score = r.score;
    ev.rule_fired = r.rule_fired;
    ev.cls = r.cls;
    out.push_back(std::move(ev));
  }
  return out;
}

}  // namespace

PipelineResult run_detect(const Recording& rec, const PipelineConfig& cfg, int workers,
                          bool apply_postclass) {
  if (rec.fs <= 0) throw InputError("recording has no sampling rate");
  const FuzzyRuleBase base =
      cfg.rulebase_path.empty() ? default_rulebase() : load_rulebase(cfg.rulebase_path);

  const int n_channels = static_cast<int>(rec.channels.size());
  std::vector<std::vector<ClassifiedEvent>> per_channel(n_channels);

  workers = std::clamp(workers, 1, std::max(1, n_channels));
  if (workers == 1) {
    for (int c = 0; c < n_channels; ++c) per_channel[c] = score_channel(rec, c, cfg, base);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int c = next.fetch_add(1); c < n_channels; c = next.fetch_add(1)) {
          try {
            per_channel[c] = score_channel(rec, c, cfg, base);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  PipelineResult result;
  for (auto& part : per_channel)
    result.scored.insert(result.scored.end(), part.begin(), part.end());
  std::sort(result.scored.begin(), result.scored.end(),
            [](const ClassifiedEvent& a, const ClassifiedEvent& b) {
              if (a.candidate.channel != b.candidate.channel)
                return a.candidate.channel < b.candidate.channel;
              return a.candidate.peak_sample < b.candidate.peak_sample;
            });

  result.detections = apply_rejection_rules(
      result.scored, apply_postclass ? cfg.postclass_enable : std::set<std::string>{});
  return result;
}

RocCurve run_roc(const std::vector<ClassifiedEvent>& scored, const AnnotationSet& ann,
                 const PipelineConfig& cfg, bool apply_postclass) {
  RocOptions opts;
  opts.tol_ms = cfg.tolerance_ms;
  opts.postclass = apply_postclass;
  opts.enabled_rules = cfg.postclass_enable;
  opts.possible_floor = cfg.possible_floor;
  return roc_sweep(scored, ann, cfg.roc_thresholds, opts);
}

void write_feature_csv(const std::vector<ClassifiedEvent>& scored, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "channel,time_s,scale_a,coefficient,segment_std_uv,amp1_uv,amp2_uv,amp_baseline_uv,"
         "dura_ms,durb_ms,dur1_ms,dur2_ms,slope1,slope2,score,class\n";
  char buf[512];
  for (const ClassifiedEvent& ev : scored) {
    const CandidateEvent& c = ev.candidate;
    const FeatureVector& f = ev.features;
    std::snprintf(buf, sizeof(buf),
                  "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%s\n",
                  c.channel.c_str(), c.peak_time_s, c.scale_a, c.coefficient, c.segment_std_uv,
                  f.amp1_uv, f.amp2_uv, f.amp_baseline_uv, f.dura_ms, f.durb_ms, f.dur1_ms,
                  f.dur2_ms, f.slope1, f.slope2, ev.score, to_string(ev.cls));
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace spikedet
