#include "spikedet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "spikedet/errors.hpp"
#include "spikedet/postclass.hpp"

namespace spikedet {

const std::vector<double> kDefaultRocThresholds = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};

MatchCounts match_events(const DetectionList& detections, const AnnotationSet& annotations,
                         double tol_ms, const std::set<std::string>& known_channels) {
  if (tol_ms <= 0) throw RangeError("tolerance must be positive");
  if (!known_channels.empty())
    for (const Detection& d : detections.events)
      if (!known_channels.count(d.channel))
        throw LabelError("detection on unknown channel '" + d.channel + "'");

  const double tol_s = tol_ms / 1000.0;

  struct ChannelData {
    std::vector<double> positives;
    std::vector<char> claimed;
    std::vector<double> negatives;
    std::vector<double> marks;
  };
  std::map<std::string, ChannelData> by_channel;
  for (const Detection& d : detections.events) {
    auto& ch = by_channel[d.channel];
    if (d.cls == EventClass::epileptiform)
      ch.positives.push_back(d.time_s);
    else
      ch.negatives.push_back(d.time_s);
  }
  for (const Mark& m : annotations.marks) by_channel[m.channel].marks.push_back(m.time_s);

  MatchCounts c;
  for (auto& [label, ch] : by_channel) {
    std::sort(ch.positives.begin(), ch.positives.end());
    std::sort(ch.marks.begin(), ch.marks.end());
    ch.claimed.assign(ch.positives.size(), 0);

    for (double mark : ch.marks) {
      bool hit = false;
      for (size_t i = 0; i < ch.positives.size(); ++i) {
        if (ch.claimed[i]) continue;
        if (std::abs(ch.positives[i] - mark) < tol_s) {
          ch.claimed[i] = 1;
          hit = true;
        }
      }
      hit ? ++c.tp : ++c.fn;
    }
    for (char cl : ch.claimed)
      if (!cl) ++c.fp;

    for (double t : ch.negatives) {
      bool near_mark = false;
      for (double mark : ch.marks)
        if (std::abs(t - mark) < tol_s) {
          near_mark = true;
          break;
        }
      if (!near_mark) ++c.tn;
    }
  }
  return c;
}

std::optional<double> sensitivity(const MatchCounts& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::optional<double> specificity(const MatchCounts& c) {
  if (c.tn + c.fp == 0) return std::nullopt;
  return static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
}

RocCurve roc_sweep(const std::vector<ClassifiedEvent>& scored_events,
                   const AnnotationSet& annotations, const std::vector<double>& thresholds,
                   const RocOptions& opts) {
  for (size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] < 0.0 || thresholds[i] > 1.0)
      throw ConfigError("roc threshold outside [0,1]");
    if (i > 0 && thresholds[i] <= thresholds[i - 1])
      throw ConfigError("roc thresholds must be strictly increasing");
  }

  RocCurve curve;
  double best = -1.0;
  for (double t : thresholds) {
    std::vector<ClassifiedEvent> relabeled = scored_events;
    for (ClassifiedEvent& ev : relabeled) {
      if (ev.score >= t)
        ev.cls = EventClass::epileptiform;
      else if (ev.score >= opts.possible_floor)
        ev.cls = EventClass::possible;
      else
        ev.cls = EventClass::non_epileptiform;
    }
    DetectionList det = apply_rejection_rules(
        relabeled, opts.postclass ? opts.enabled_rules : std::set<std::string>{});

    RocPoint p;
    p.threshold = t;
    p.counts = match_events(det, annotations, opts.tol_ms);
    p.sensitivity = sensitivity(p.counts);
    p.specificity = specificity(p.counts);
    if (p.sensitivity && p.specificity) {
      double youden = *p.sensitivity + *p.specificity;
      if (youden > best) {
        best = youden;
        curve.optimal_index = static_cast<int>(curve.points.size());
      }
    }
    curve.points.push_back(p);
  }
  return curve;
}

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string rate_cell(const std::optional<double>& r) { return r ? fmt(*r) : "NA"; }

// Plot geometry: x is the false-positive rate in percent, y sensitivity in
// percent.
constexpr double kLeft = 70, kRight = 610, kTop = 20, kBottom = 460;

double sx(double fpr_pct) { return kLeft + (kRight - kLeft) * fpr_pct / 100.0; }
double sy(double tpr_pct) { return kBottom - (kBottom - kTop) * tpr_pct / 100.0; }

}  // namespace

void write_report(const RocCurve& curve, const std::string& csv_path,
                  const std::string& svg_path) {
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw IoError("cannot write " + csv_path);
    csv << "threshold,tp,fp,tn,fn,sensitivity,specificity\n";
    for (const RocPoint& p : curve.points)
      csv << fmt(p.threshold, "%.4f") << ',' << p.counts.tp << ',' << p.counts.fp << ','
          << p.counts.tn << ',' << p.counts.fn << ',' << rate_cell(p.sensitivity) << ','
          << rate_cell(p.specificity) << '\n';
    if (!csv) throw IoError("write failed: " + csv_path);
  }

  std::ofstream svg(svg_path, std::ios::binary);
  if (!svg) throw IoError("cannot write " + svg_path);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"680\" height=\"520\" "
         "viewBox=\"0 0 680 520\">\n"
         "<rect width=\"680\" height=\"520\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << (kRight - kLeft)
      << "\" height=\"" << (kBottom - kTop) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int pct = 0; pct <= 100; pct += 20) {
    svg << "<line x1=\"" << fmt(sx(pct), "%.1f") << "\" y1=\"" << kBottom << "\" x2=\""
        << fmt(sx(pct), "%.1f") << "\" y2=\"" << (kBottom + 6) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(sx(pct), "%.1f") << "\" y=\"" << (kBottom + 22)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << pct << "</text>\n";
    svg << "<line x1=\"" << (kLeft - 6) << "\" y1=\"" << fmt(sy(pct), "%.1f") << "\" x2=\""
        << kLeft << "\" y2=\"" << fmt(sy(pct), "%.1f") << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (kLeft - 10) << "\" y=\"" << fmt(sy(pct) + 4, "%.1f")
        << "\" font-size=\"12\" text-anchor=\"end\">" << pct << "</text>\n";
  }
  svg << "<text x=\"" << fmt((kLeft + kRight) / 2, "%.1f") << "\" y=\"" << (kBottom + 45)
      << "\" font-size=\"14\" text-anchor=\"middle\">100 - Specificity (%)</text>\n";
  svg << "<text x=\"18\" y=\"" << fmt((kTop + kBottom) / 2, "%.1f")
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt((kTop + kBottom) / 2, "%.1f") << ")\">Sensitivity (%)</text>\n";
  svg << "<line x1=\"" << fmt(sx(0), "%.1f") << "\" y1=\"" << fmt(sy(0), "%.1f") << "\" x2=\""
      << fmt(sx(100), "%.1f") << "\" y2=\"" << fmt(sy(100), "%.1f")
      << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";

  std::vector<std::pair<double, double>> pts;  // (fpr%, tpr%)
  for (const RocPoint& p : curve.points) {
    if (!p.sensitivity || !p.specificity) continue;
    pts.emplace_back(100.0 * (1.0 - *p.specificity), 100.0 * *p.sensitivity);
  }
  if (pts.size() > 1) {
    svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : pts) svg << fmt(sx(x), "%.1f") << ',' << fmt(sy(y), "%.1f") << ' ';
    svg << "\"/>\n";
  }
  for (size_t i = 0; i < curve.points.size(); ++i) {
    const RocPoint& p = curve.points[i];
    if (!p.sensitivity || !p.specificity) continue;
    double x = sx(100.0 * (1.0 - *p.specificity));
    double y = sy(100.0 * *p.sensitivity);
    if (static_cast<int>(i) == curve.optimal_index) {
      svg << "<line x1=\"" << fmt(x, "%.1f") << "\" y1=\"" << kTop << "\" x2=\"" << fmt(x, "%.1f")
          << "\" y2=\"" << kBottom << "\" stroke=\"#d62728\" stroke-width=\"0.7\"/>\n";
      svg << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y, "%.1f") << "\" x2=\"" << kRight
          << "\" y2=\"" << fmt(y, "%.1f") << "\" stroke=\"#d62728\" stroke-width=\"0.7\"/>\n";
    }
    svg << "<circle cx=\"" << fmt(x, "%.1f") << "\" cy=\"" << fmt(y, "%.1f")
        << "\" r=\"4\" fill=\"" << (static_cast<int>(i) == curve.optimal_index ? "#d62728" : "#1f77b4")
        << "\"/>\n";
    svg << "<text x=\"" << fmt(x + 7, "%.1f") << "\" y=\"" << fmt(y - 6, "%.1f")
        << "\" font-size=\"11\">" << fmt(p.threshold, "%.2f") << "</text>\n";
  }
  svg << "</svg>\n";
  if (!svg) throw IoError("write failed: " + svg_path);
}

}  // namespace spikedet
