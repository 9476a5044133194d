#include "spikedet/signal_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "spikedet/errors.hpp"

namespace spikedet {

using nlohmann::json;

const char* to_string(EventClass c) {
  switch (c) {
    case EventClass::non_epileptiform: return "non_epileptiform";
    case EventClass::possible: return "possible";
    case EventClass::epileptiform: return "epileptiform";
  }
  return "non_epileptiform";
}

EventClass event_class_from_string(const std::string& s) {
  if (s == "non_epileptiform") return EventClass::non_epileptiform;
  if (s == "possible") return EventClass::possible;
  if (s == "epileptiform") return EventClass::epileptiform;
  throw FormatError("unknown event class '" + s + "'");
}

namespace {

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_real(const std::string& s, const std::string& what, int line_no) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("non-numeric " + what + " '" + s + "' (line " + std::to_string(line_no) +
                      ")");
  }
}

void sort_marks(std::vector<Mark>& marks) {
  std::stable_sort(marks.begin(), marks.end(), [](const Mark& a, const Mark& b) {
    if (a.channel != b.channel) return a.channel < b.channel;
    return a.time_s < b.time_s;
  });
}

}  // namespace

Recording read_recording(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string magic;
  if (!std::getline(in, magic)) throw FormatError(path + ": empty file (line 1)");
  if (!magic.empty() && magic.back() == '\r') magic.pop_back();
  if (magic != "EEGR1") throw FormatError(path + ": bad magic '" + magic + "' (line 1)");

  std::string header_line;
  if (!std::getline(in, header_line)) throw FormatError(path + ": missing header (line 2)");

  json h;
  try {
    h = json::parse(header_line);
  } catch (const json::exception& e) {
    throw FormatError(path + ": header is not valid JSON (line 2): " + e.what());
  }

  Recording rec;
  try {
    rec.fs = h.at("fs").get<double>();
    const auto& names = h.at("channels");
    int64_t n = h.at("n_samples").get<int64_t>();
    std::string unit = h.value("unit", "uV");
    double scale = h.value("scale", 1.0);
    if (unit != "uV") throw FormatError(path + ": unsupported unit '" + unit + "'");
    if (rec.fs <= 0) throw RangeError(path + ": fs must be positive");
    if (n < 0) throw RangeError(path + ": n_samples must be non-negative");
    if (!names.is_array() || names.empty())
      throw FormatError(path + ": channels must be a non-empty list");

    size_t nch = names.size();
    std::vector<float> raw(static_cast<size_t>(n) * nch);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
    if (static_cast<size_t>(in.gcount()) != raw.size() * sizeof(float))
      throw IntegrityError(path + ": sample payload truncated (expected " +
                           std::to_string(raw.size() * sizeof(float)) + " bytes, got " +
                           std::to_string(in.gcount()) + ")");
    char extra;
    if (in.read(&extra, 1))
      throw IntegrityError(path + ": trailing bytes after sample payload");

    rec.channels.resize(nch);
    for (size_t c = 0; c < nch; ++c) {
      rec.channels[c].label = names[c].get<std::string>();
      rec.channels[c].samples.resize(n);
    }
    for (int64_t i = 0; i < n; ++i)
      for (size_t c = 0; c < nch; ++c)
        rec.channels[c].samples[i] = static_cast<double>(raw[i * nch + c]) * scale;
  } catch (const json::exception& e) {
    throw FormatError(path + ": header field error (line 2): " + e.what());
  }
  return rec;
}

void write_recording(const Recording& rec, const std::string& path) {
  if (rec.fs <= 0) throw RangeError("recording fs must be positive");
  for (const auto& ch : rec.channels)
    if (ch.samples.size() != rec.n_samples())
      throw IntegrityError("channel '" + ch.label + "' length differs");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");

  json h;
  h["fs"] = rec.fs;
  auto names = json::array();
  for (const auto& ch : rec.channels) names.push_back(ch.label);
  h["channels"] = names;
  h["n_samples"] = rec.n_samples();
  h["unit"] = "uV";
  h["scale"] = 1.0;
  out << "EEGR1\n" << h.dump() << "\n";

  int64_t n = rec.n_samples();
  size_t nch = rec.channels.size();
  std::vector<float> raw(static_cast<size_t>(n) * nch);
  for (int64_t i = 0; i < n; ++i)
    for (size_t c = 0; c < nch; ++c)
      raw[i * nch + c] = static_cast<float>(rec.channels[c].samples[i]);
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (!out) throw IoError("write failed for '" + path + "'");
}

AnnotationSet read_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  AnnotationSet ann;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (!line.starts_with("channel,time_s,kind"))
        throw FormatError(path + ": bad annotation header (line 1)");
      continue;
    }
    if (line.empty() || line == "\r") continue;
    auto cols = split_csv_line(line);
    if (cols.size() != 3)
      throw FormatError(path + ": expected 3 columns (line " + std::to_string(line_no) + ")");
    Mark m;
    m.channel = cols[0];
    m.time_s = parse_real(cols[1], "time", line_no);
    if (m.time_s < 0)
      throw RangeError(path + ": negative time " + cols[1] + " (line " +
                       std::to_string(line_no) + ")");
    m.kind = cols[2];
    ann.marks.push_back(std::move(m));
  }
  sort_marks(ann.marks);
  return ann;
}

void write_annotations(const AnnotationSet& ann, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "channel,time_s,kind\n";
  auto marks = ann.marks;
  sort_marks(marks);
  for (const auto& m : marks) out << m.channel << ',' << fmt_real(m.time_s) << ',' << m.kind << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

DetectionList read_detections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  DetectionList det;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (!line.starts_with("channel,time_s,score,class,rejected_by"))
        throw FormatError(path + ": bad detection header (line 1)");
      continue;
    }
    if (line.empty() || line == "\r") continue;
    auto cols = split_csv_line(line);
    if (cols.size() != 5)
      throw FormatError(path + ": expected 5 columns (line " + std::to_string(line_no) + ")");
    Detection d;
    d.channel = cols[0];
    d.time_s = parse_real(cols[1], "time", line_no);
    if (d.time_s < 0)
      throw RangeError(path + ": negative time (line " + std::to_string(line_no) + ")");
    d.score = parse_real(cols[2], "score", line_no);
    if (d.score < 0.0 || d.score > 1.0)
      throw RangeError(path + ": score outside [0,1] (line " + std::to_string(line_no) + ")");
    d.cls = event_class_from_string(cols[3]);
    d.rejected_by = cols[4];
    det.events.push_back(std::move(d));
  }
  std::stable_sort(det.events.begin(), det.events.end(),
                   [](const Detection& a, const Detection& b) {
                     if (a.channel != b.channel) return a.channel < b.channel;
                     return a.time_s < b.time_s;
                   });
  return det;
}

void write_detections(const DetectionList& det, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "channel,time_s,score,class,rejected_by\n";
  for (const auto& d : det.events)
    out << d.channel << ',' << fmt_real(d.time_s) << ',' << fmt_real(d.score) << ','
        << to_string(d.cls) << ',' << d.rejected_by << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace spikedet
