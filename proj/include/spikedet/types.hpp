#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace spikedet {

using Signal = Eigen::VectorXd;  // samples in microvolts

struct Channel {
  std::string label;
  Signal samples;
};

struct Recording {
  double fs = 0.0;  // Hz
  std::vector<Channel> channels;

  int64_t n_samples() const { return channels.empty() ? 0 : channels.front().samples.size(); }
  double duration_s() const { return fs > 0 ? static_cast<double>(n_samples()) / fs : 0.0; }
};

struct Mark {
  std::string channel;
  double time_s = 0.0;
  std::string kind;
};

struct AnnotationSet {
  std::vector<Mark> marks;  // sorted by (channel, time_s)
};

enum class EventClass { non_epileptiform, possible, epileptiform };

const char* to_string(EventClass c);
EventClass event_class_from_string(const std::string& s);

struct Detection {
  std::string channel;
  double time_s = 0.0;
  double score = 0.0;
  EventClass cls = EventClass::non_epileptiform;
  std::string rejected_by;  // rule id, empty when not rejected
};

struct DetectionList {
  std::vector<Detection> events;  // sorted by (channel, time_s)
};

struct CandidateEvent {
  std::string channel;
  int channel_index = 0;
  double peak_time_s = 0.0;
  int64_t peak_sample = 0;
  double scale_a = 0.0;
  double coefficient = 0.0;  // |CWT response| that selected the peak
  double segment_std_uv = 0.0;
};

struct FeatureVector {
  double amp1_uv = 0.0;
  double amp2_uv = 0.0;
  double amp_baseline_uv = 0.0;
  double dura_ms = 0.0;
  double durb_ms = 0.0;
  double dur1_ms = 0.0;
  double dur2_ms = 0.0;
  double slope1 = 0.0;  // µV/ms
  double slope2 = 0.0;
};

struct ClassifiedEvent {
  CandidateEvent candidate;
  FeatureVector features;
  double score = 0.0;
  bool rule_fired = false;
  EventClass cls = EventClass::non_epileptiform;
};

}  // namespace spikedet
