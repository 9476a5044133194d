#include "spikedet/config.hpp"

#include <fstream>
#include <sstream>

#include "spikedet/errors.hpp"
#include "spikedet/wavelet.hpp"

namespace spikedet {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double number(const std::string& v, const std::string& origin, int line) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) fail(origin, line, "bad number '" + v + "'");
    return d;
  } catch (const std::invalid_argument&) {
    fail(origin, line, "bad number '" + v + "'");
  } catch (const std::out_of_range&) {
    fail(origin, line, "number out of range '" + v + "'");
  }
}

std::vector<std::string> split_list(std::string v) {
  // accepts "a, b, c" and "[a, b, c]"
  v = trim(v);
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<std::string> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

PipelineConfig parse_config(const std::string& text, const std::string& origin) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "detector" && section != "fuzzy" && section != "postclass" &&
          section != "eval")
        fail(origin, lineno, "unknown section [" + section + "]");
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, lineno, "empty key");
    if (section.empty()) fail(origin, lineno, "key '" + key + "' outside any section");

    if (section == "detector") {
      if (key == "wavelet")
        cfg.detector.wavelet = value;
      else if (key == "cascade_iterations")
        cfg.detector.cascade_iterations = static_cast<int>(number(value, origin, lineno));
      else if (key == "scales") {
        cfg.detector.scales.clear();
        for (const std::string& s : split_list(value))
          cfg.detector.scales.push_back(number(s, origin, lineno));
        if (cfg.detector.scales.empty()) fail(origin, lineno, "scales list is empty");
      } else if (key == "k")
        cfg.detector.k = number(value, origin, lineno);
      else if (key == "window_s")
        cfg.detector.window.window_s = number(value, origin, lineno);
      else if (key == "hop_s")
        cfg.detector.window.hop_s = number(value, origin, lineno);
      else if (key == "min_separation_ms")
        cfg.detector.min_separation_ms = number(value, origin, lineno);
      else
        fail(origin, lineno, "unknown key '" + key + "' in [detector]");
    } else if (section == "fuzzy") {
      if (key == "rulebase")
        cfg.rulebase_path = value;
      else if (key == "decision_threshold")
        cfg.decision_threshold = number(value, origin, lineno);
      else if (key == "possible_floor")
        cfg.possible_floor = number(value, origin, lineno);
      else
        fail(origin, lineno, "unknown key '" + key + "' in [fuzzy]");
    } else if (section == "postclass") {
      if (key == "enable") {
        cfg.postclass_enable.clear();
        for (const std::string& s : split_list(value)) cfg.postclass_enable.insert(s);
      } else
        fail(origin, lineno, "unknown key '" + key + "' in [postclass]");
    } else {  // eval
      if (key == "tolerance_ms")
        cfg.tolerance_ms = number(value, origin, lineno);
      else if (key == "roc_thresholds") {
        cfg.roc_thresholds.clear();
        for (const std::string& s : split_list(value))
          cfg.roc_thresholds.push_back(number(s, origin, lineno));
      } else
        fail(origin, lineno, "unknown key '" + key + "' in [eval]");
    }
  }

  const auto check = [&](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(origin + ": " + msg);
  };
  scaling_filter(cfg.detector.wavelet);  // rejects unknown wavelet names
  check(cfg.detector.cascade_iterations >= 6, "cascade_iterations must be >= 6");
  check(cfg.detector.k > 0, "k must be positive");
  check(cfg.detector.window.window_s > 0, "window_s must be positive");
  check(cfg.detector.window.hop_s > 0 &&
            cfg.detector.window.hop_s <= cfg.detector.window.window_s,
        "hop_s must satisfy 0 < hop_s <= window_s");
  for (double s : cfg.detector.scales) check(s > 0, "scales must be positive");
  check(cfg.detector.min_separation_ms > 0, "min_separation_ms must be positive");
  check(cfg.decision_threshold >= 0 && cfg.decision_threshold <= 1,
        "decision_threshold must lie in [0,1]");
  check(cfg.possible_floor >= 0 && cfg.possible_floor <= cfg.decision_threshold,
        "possible_floor must lie in [0, decision_threshold]");
  for (const std::string& id : cfg.postclass_enable)
    check(id.size() == 1 && id >= "a" && id <= "e",
          "unknown post-classification rule '" + id + "'");
  check(cfg.tolerance_ms > 0, "tolerance_ms must be positive");
  for (size_t i = 0; i < cfg.roc_thresholds.size(); ++i) {
    check(cfg.roc_thresholds[i] >= 0 && cfg.roc_thresholds[i] <= 1,
          "roc_thresholds must lie in [0,1]");
    if (i) check(cfg.roc_thresholds[i] > cfg.roc_thresholds[i - 1],
                 "roc_thresholds must be strictly increasing");
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace spikedet
