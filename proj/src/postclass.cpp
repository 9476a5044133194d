#include "spikedet/postclass.hpp"

#include <map>

#include "spikedet/errors.hpp"

namespace spikedet {

const std::vector<RejectionRule>& rejection_rules() {
  static const std::vector<RejectionRule> rules = {
      {"a", "alpha rhythm"}, {"b", "EMG/alpha"},        {"c", "K Complex"},
      {"d", "EOG"},          {"e", "temporal context"},
  };
  return rules;
}

DetectionList apply_rejection_rules(const std::vector<ClassifiedEvent>& events,
                                    const std::set<std::string>& enabled) {
  for (const auto& id : enabled)
    if (id < "a" || id > "e" || id.size() != 1)
      throw ConfigError("unknown post-classification rule '" + id + "'");
  for (size_t i = 1; i < events.size(); ++i) {
    const auto& prev = events[i - 1].candidate;
    const auto& cur = events[i].candidate;
    if (cur.channel < prev.channel ||
        (cur.channel == prev.channel && cur.peak_time_s < prev.peak_time_s))
      throw InputError("events must be sorted by (channel, time)");
  }

  const auto on = [&](const char* id) { return enabled.count(id) != 0; };

  DetectionList out;
  out.events.reserve(events.size());
  std::map<std::string, double> last_surviving;  // channel -> peak time

  for (const ClassifiedEvent& ev : events) {
    Detection d;
    d.channel = ev.candidate.channel;
    d.time_s = ev.candidate.peak_time_s;
    d.score = ev.score;
    d.cls = ev.cls;

    if (ev.cls == EventClass::epileptiform) {
      const FeatureVector& f = ev.features;
      if (on("a") && f.amp1_uv < 50.0 && f.amp2_uv < 50.0)
        d.rejected_by = "a";
      else if (on("b") && f.dur1_ms < 20.0)
        d.rejected_by = "b";
      else if (on("c") && f.dur1_ms > 350.0)
        d.rejected_by = "c";
      else if (on("d") && (f.dura_ms > 150.0 || f.durb_ms > 150.0))
        d.rejected_by = "d";
      else if (on("e")) {
        auto it = last_surviving.find(d.channel);
        if (it != last_surviving.end() && (d.time_s - it->second) * 1000.0 < 100.0)
          d.rejected_by = "e";
      }
      if (!d.rejected_by.empty())
        d.cls = EventClass::non_epileptiform;
      else
        last_surviving[d.channel] = d.time_s;
    }
    out.events.push_back(std::move(d));
  }
  return out;
}

}  // namespace spikedet
