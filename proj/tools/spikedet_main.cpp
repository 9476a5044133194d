#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "spikedet/errors.hpp"
#include "spikedet/eval.hpp"
#include "spikedet/pipeline.hpp"
#include "spikedet/signal_io.hpp"
#include "spikedet/synth.hpp"

namespace {

using namespace spikedet;

PipelineConfig config_for(const std::string& config_path) {
  return config_path.empty() ? PipelineConfig{} : load_config(config_path);
}

int cmd_detect(const std::string& recording_path, const std::string& config_path,
               const std::string& out_path, double threshold, bool no_postclass,
               const std::string& features_path, int workers) {
  PipelineConfig cfg = config_for(config_path);
  if (threshold >= 0) {
    if (threshold > 1) throw ConfigError("--threshold must lie in [0,1]");
    cfg.decision_threshold = threshold;
    cfg.possible_floor = std::min(cfg.possible_floor, threshold);
  }
  Recording rec = read_recording(recording_path);
  PipelineResult result = run_detect(rec, cfg, workers, !no_postclass);
  write_detections(result.detections, out_path);
  if (!features_path.empty()) write_feature_csv(result.scored, features_path);

  int64_t positive = 0, rejected = 0;
  for (const Detection& d : result.detections.events) {
    if (d.cls == EventClass::epileptiform) ++positive;
    if (!d.rejected_by.empty()) ++rejected;
  }
  std::printf("candidates=%zu epileptiform=%lld rejected=%lld out=%s\n", result.scored.size(),
              static_cast<long long>(positive), static_cast<long long>(rejected),
              out_path.c_str());
  return 0;
}

int cmd_evaluate(const std::string& detections_path, const std::string& annotations_path,
                 const std::string& config_path, const std::string& out_path) {
  PipelineConfig cfg = config_for(config_path);
  DetectionList det = read_detections(detections_path);
  AnnotationSet ann = read_annotations(annotations_path);

  if (!det.events.empty() && !ann.marks.empty()) {
    std::set<std::string> det_channels, ann_channels;
    for (const Detection& d : det.events) det_channels.insert(d.channel);
    for (const Mark& m : ann.marks) ann_channels.insert(m.channel);
    bool overlap = false;
    for (const std::string& c : det_channels)
      if (ann_channels.count(c)) {
        overlap = true;
        break;
      }
    if (!overlap)
      throw LabelError("detections and annotations share no channel labels");
  }

  MatchCounts c = match_events(det, ann, cfg.tolerance_ms);
  auto sens = sensitivity(c);
  auto spec = specificity(c);
  const auto cell = [](const std::optional<double>& r) {
    char buf[32];
    if (!r) return std::string("NA");
    std::snprintf(buf, sizeof(buf), "%.6f", *r);
    return std::string(buf);
  };
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + out_path);
    out << "tp,fp,tn,fn,sensitivity,specificity\n"
        << c.tp << ',' << c.fp << ',' << c.tn << ',' << c.fn << ',' << cell(sens) << ','
        << cell(spec) << '\n';
    if (!out) throw IoError("write failed: " + out_path);
  }
  std::printf("tp=%lld fp=%lld tn=%lld fn=%lld sensitivity=%s specificity=%s\n",
              static_cast<long long>(c.tp), static_cast<long long>(c.fp),
              static_cast<long long>(c.tn), static_cast<long long>(c.fn), cell(sens).c_str(),
              cell(spec).c_str());
  return 0;
}

int cmd_roc(const std::string& recording_path, const std::string& annotations_path,
            const std::string& config_path, const std::string& out_prefix, bool no_postclass,
            int workers) {
  PipelineConfig cfg = config_for(config_path);
  Recording rec = read_recording(recording_path);
  AnnotationSet ann = read_annotations(annotations_path);
  PipelineResult result = run_detect(rec, cfg, workers, !no_postclass);
  RocCurve curve = run_roc(result.scored, ann, cfg, !no_postclass);

  const std::string csv_path = out_prefix + ".csv";
  const std::string svg_path = out_prefix + ".svg";
  write_report(curve, csv_path, svg_path);
  if (curve.optimal_index >= 0) {
    const RocPoint& p = curve.points[curve.optimal_index];
    std::printf("optimal threshold=%.2f sensitivity=%.6f specificity=%.6f\n", p.threshold,
                *p.sensitivity, *p.specificity);
  } else {
    std::printf("optimal threshold=NA\n");
  }
  std::printf("wrote %s and %s\n", csv_path.c_str(), svg_path.c_str());
  return 0;
}

int cmd_synth(const std::string& spec_arg, const std::string& out_dir) {
  SynthSpec spec;
  bool preset = false;
  for (const SynthSpec& s : default_corpus())
    if (s.name == spec_arg) {
      spec = s;
      preset = true;
      break;
    }
  if (!preset) spec = load_synth_spec(spec_arg);

  auto [rec, ann] = generate(spec);
  const std::string base = out_dir.empty() ? spec.name : out_dir + "/" + spec.name;
  write_recording(rec, base + ".eegr");
  write_annotations(ann, base + "_annotations.csv");
  std::printf("wrote %s.eegr and %s_annotations.csv (%zu marks)\n", base.c_str(), base.c_str(),
              ann.marks.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epileptiform discharge detector"};
  app.require_subcommand(1);

  std::string config_path, recording_path, annotations_path, detections_path;
  std::string out_path, features_path, spec_arg;
  double threshold = -1;
  bool no_postclass = false;
  int workers = 1;

  CLI::App* detect = app.add_subcommand("detect", "Detect discharges in an EEGR recording");
  detect->add_option("recording", recording_path, "EEGR input file")->required();
  detect->add_option("--config", config_path, "pipeline config file");
  detect->add_option("--out", out_path, "detections CSV path")->default_val("detections.csv");
  detect->add_option("--threshold", threshold, "epileptiform score threshold override");
  detect->add_flag("--no-postclass", no_postclass, "skip post-classification rules");
  detect->add_option("--dump-features", features_path, "write per-candidate feature CSV");
  detect->add_option("--workers", workers, "worker threads")->default_val(1);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Score detections against annotations");
  evaluate->add_option("detections", detections_path, "detections CSV")->required();
  evaluate->add_option("annotations", annotations_path, "annotation CSV")->required();
  evaluate->add_option("--config", config_path, "pipeline config file");
  evaluate->add_option("--out", out_path, "counts/rates CSV path")->default_val("evaluation.csv");

  CLI::App* roc = app.add_subcommand("roc", "Threshold sweep with ROC report");
  roc->add_option("recording", recording_path, "EEGR input file")->required();
  roc->add_option("annotations", annotations_path, "annotation CSV")->required();
  roc->add_option("--config", config_path, "pipeline config file");
  roc->add_option("--out", out_path, "report path prefix")->default_val("roc");
  roc->add_flag("--no-postclass", no_postclass, "skip post-classification rules");
  roc->add_option("--workers", workers, "worker threads")->default_val(1);

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic recording");
  synth->add_option("spec", spec_arg, "JSON spec file or corpus-0/corpus-1/corpus-2")->required();
  synth->add_option("--out", out_path, "output directory")->default_val(".");

  try {
    app.parse(argc, argv);
    if (detect->parsed())
      return cmd_detect(recording_path, config_path, out_path, threshold, no_postclass,
                        features_path, workers);
    if (evaluate->parsed())
      return cmd_evaluate(detections_path, annotations_path, config_path, out_path);
    if (roc->parsed())
      return cmd_roc(recording_path, annotations_path, config_path, out_path, no_postclass,
                     workers);
    if (synth->parsed()) return cmd_synth(spec_arg, out_path);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const spikedet::Error& e) {
    std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
