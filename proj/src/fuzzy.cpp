#include "spikedet/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "spikedet/errors.hpp"

namespace spikedet {

double MembershipFunction::operator()(double x) const { return membership(x, *this); }

double membership(double x, const MembershipFunction& mf) {
  const double a = mf.b[0];
  const double b = mf.b[1];
  const double c = mf.kind == MembershipFunction::triangular ? mf.b[1] : mf.b[2];
  const double d = mf.kind == MembershipFunction::triangular ? mf.b[2] : mf.b[3];
  if (x < a || x > d) return 0.0;
  if (x >= b && x <= c) return 1.0;
  if (x < b) return (x - a) / (b - a);
  return (d - x) / (d - c);
}

double feature_value(const FeatureVector& f, const std::string& name) {
  if (name == "amp1") return f.amp1_uv;
  if (name == "amp2") return f.amp2_uv;
  if (name == "amp_baseline") return f.amp_baseline_uv;
  if (name == "dura") return f.dura_ms;
  if (name == "durb") return f.durb_ms;
  if (name == "dur1") return f.dur1_ms;
  if (name == "dur2") return f.dur2_ms;
  if (name == "slope1") return f.slope1;
  if (name == "slope2") return f.slope2;
  throw ConfigError("unknown feature '" + name + "'");
}

double antecedent_degree(const FuzzyRule& rule, const FeatureVector& f,
                         const FuzzyRuleBase& base) {
  double degree = rule.connective == FuzzyRule::AND ? 1.0 : 0.0;
  for (const auto& [feature, set_name] : rule.terms) {
    double mu = membership(feature_value(f, feature), base.inputs.at(feature).at(set_name));
    degree = rule.connective == FuzzyRule::AND ? std::min(degree, mu) : std::max(degree, mu);
  }
  return degree;
}

Eigen::VectorXd infer(const FeatureVector& f, const FuzzyRuleBase& base) {
  Eigen::VectorXd agg = Eigen::VectorXd::Zero(kAggregateGrid);
  const double step = 1.0 / (kAggregateGrid - 1);
  for (const FuzzyRule& rule : base.rules) {
    double w = antecedent_degree(rule, f, base);
    if (w <= 0.0) continue;
    const MembershipFunction& out = base.outputs.at(rule.consequent);
    for (int i = 0; i < kAggregateGrid; ++i) {
      double clipped = std::min(w, membership(i * step, out));
      if (clipped > agg[i]) agg[i] = clipped;
    }
  }
  return agg;
}

double defuzzify_centroid(const Eigen::Ref<const Eigen::VectorXd>& aggregate, bool* fired) {
  const double step = 1.0 / (aggregate.size() - 1);
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < aggregate.size(); ++i) {
    num += i * step * aggregate[i];
    den += aggregate[i];
  }
  if (den <= 0.0) {
    if (fired) *fired = false;
    return 0.0;
  }
  if (fired) *fired = true;
  return num / den;
}

ClassifierResult classify(const FeatureVector& f, const FuzzyRuleBase& base,
                          double decision_threshold, double possible_floor) {
  ClassifierResult r;
  Eigen::VectorXd agg = infer(f, base);
  r.score = defuzzify_centroid(agg, &r.rule_fired);
  if (r.score >= decision_threshold)
    r.cls = EventClass::epileptiform;
  else if (r.score >= possible_floor)
    r.cls = EventClass::possible;
  else
    r.cls = EventClass::non_epileptiform;
  return r;
}

namespace {

const char* const kFeatureNames[] = {"amp1", "amp2", "amp_baseline", "dura", "durb",
                                     "dur1", "dur2", "slope1",       "slope2"};

bool known_feature(const std::string& name) {
  for (const char* f : kFeatureNames)
    if (name == f) return true;
  return false;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& tok, const std::string& origin, int line) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) fail(origin, line, "bad number '" + tok + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail(origin, line, "bad number '" + tok + "'");
  } catch (const std::out_of_range&) {
    fail(origin, line, "number out of range '" + tok + "'");
  }
}

}  // namespace

FuzzyRuleBase parse_rulebase(const std::string& text, const std::string& origin) {
  FuzzyRuleBase base;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok{std::istream_iterator<std::string>(ls),
                                 std::istream_iterator<std::string>()};
    if (tok.empty()) continue;

    if (tok[0] == "set") {
      if (tok.size() < 4) fail(origin, lineno, "set needs: set <feature> <name> tri|trap ...");
      const std::string& feature = tok[1];
      const std::string& name = tok[2];
      const std::string& shape = tok[3];
      MembershipFunction mf;
      size_t want;
      if (shape == "tri") {
        mf.kind = MembershipFunction::triangular;
        want = 3;
      } else if (shape == "trap") {
        mf.kind = MembershipFunction::trapezoidal;
        want = 4;
      } else {
        fail(origin, lineno, "shape must be tri or trap, got '" + shape + "'");
      }
      if (tok.size() != 4 + want)
        fail(origin, lineno, shape + " needs " + std::to_string(want) + " breakpoints");
      for (size_t i = 0; i < want; ++i) mf.b[i] = parse_number(tok[4 + i], origin, lineno);
      for (size_t i = 0; i + 1 < want; ++i)
        if (mf.b[i] > mf.b[i + 1]) fail(origin, lineno, "breakpoints must be non-decreasing");

      if (feature == "out") {
        if (mf.b[0] < 0.0 || mf.b[want - 1] > 1.0)
          fail(origin, lineno, "output set support must lie within [0,1]");
        if (!base.outputs.emplace(name, mf).second)
          fail(origin, lineno, "duplicate output set '" + name + "'");
      } else {
        if (!known_feature(feature)) fail(origin, lineno, "unknown feature '" + feature + "'");
        if (!base.inputs[feature].emplace(name, mf).second)
          fail(origin, lineno, "duplicate set '" + name + "' for feature " + feature);
      }
      continue;
    }

    if (tok[0] == "IF") {
      FuzzyRule rule;
      rule.line = lineno;
      size_t i = 1;
      bool have_connective = false;
      while (true) {
        if (i + 2 >= tok.size() || tok[i + 1] != "is")
          fail(origin, lineno, "expected '<feature> is <set>'");
        rule.terms.emplace_back(tok[i], tok[i + 2]);
        i += 3;
        if (i >= tok.size()) fail(origin, lineno, "rule is missing THEN clause");
        if (tok[i] == "THEN") break;
        FuzzyRule::Connective c;
        if (tok[i] == "AND")
          c = FuzzyRule::AND;
        else if (tok[i] == "OR")
          c = FuzzyRule::OR;
        else
          fail(origin, lineno, "expected AND, OR, or THEN, got '" + tok[i] + "'");
        if (have_connective && c != rule.connective)
          fail(origin, lineno, "a rule may use AND or OR, not both");
        rule.connective = c;
        have_connective = true;
        ++i;
      }
      if (tok.size() != i + 4 || tok[i + 1] != "out" || tok[i + 2] != "is")
        fail(origin, lineno, "rule must end with 'THEN out is <class>'");
      rule.consequent = tok[i + 3];
      base.rules.push_back(std::move(rule));
      continue;
    }

    fail(origin, lineno, "expected 'set' or 'IF', got '" + tok[0] + "'");
  }

  for (const char* name : {"small", "medium", "large"})
    if (!base.outputs.count(name))
      throw ConfigError(origin + ": output set '" + std::string(name) + "' is not declared");

  bool any_large = false;
  for (const FuzzyRule& rule : base.rules) {
    for (const auto& [feature, set_name] : rule.terms) {
      if (feature == "out") fail(origin, rule.line, "'out' cannot appear in an antecedent");
      if (!known_feature(feature)) fail(origin, rule.line, "unknown feature '" + feature + "'");
      auto it = base.inputs.find(feature);
      if (it == base.inputs.end() || !it->second.count(set_name))
        fail(origin, rule.line, "set '" + set_name + "' is not declared for " + feature);
    }
    if (!base.outputs.count(rule.consequent))
      fail(origin, rule.line, "output set '" + rule.consequent + "' is not declared");
    if (rule.consequent == "large") any_large = true;
  }
  if (base.rules.empty()) throw ConfigError(origin + ": rulebase declares no rules");
  if (!any_large) throw ConfigError(origin + ": no rule concludes 'large'");
  return base;
}

FuzzyRuleBase load_rulebase(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open rulebase file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rulebase(buf.str(), path);
}

const std::string& default_rulebase_text() {
  static const std::string text = R"(# Default classifier rulebase.
#
# Amplitude sets span the normal EEG range (events above ~400 uV are
# artifacts, below ~50 uV background); duration sets follow the spike
# (20-70 ms) and sharp-wave (70-200 ms) conventions.

set amp1 small trap 0 0 30 60
set amp1 medium trap 40 70 220 300
set amp1 large trap 220 320 100000 100000
set amp2 small trap 0 0 30 60
set amp2 medium trap 40 70 220 300
set amp2 large trap 220 320 100000 100000
set amp_baseline small trap 0 0 25 50
set amp_baseline medium trap 35 60 220 300
set amp_baseline large trap 220 320 100000 100000

set dur1 tiny trap 0 0 14 22
set dur1 spiky trap 15 22 65 90
set dur1 sharpish trap 65 90 190 240
set dur1 long trap 200 300 100000 100000
set dura brief trap 0 0 5 9
set dura ok trap 6 10 130 170
set dura long trap 130 190 100000 100000
set durb brief trap 0 0 5 9
set durb ok trap 6 10 130 170
set durb long trap 130 190 100000 100000
set dur2 tiny trap 0 0 8 15
set dur2 ok trap 10 18 190 250
set dur2 long trap 190 270 100000 100000

set slope1 flat trap 0 0 0.3 0.7
set slope1 steep trap 0.5 1.2 100000 100000
set slope2 flat trap 0 0 0.3 0.7
set slope2 steep trap 0.5 1.2 100000 100000

set out small trap 0 0 0.3 0.5
set out medium tri 0.3 0.5 0.8
set out large trap 0.7 0.8 1 1

# Epileptiform morphologies: a clear transient of spike or sharp-wave
# duration with steep flanks.
IF amp1 is medium AND dur1 is spiky AND slope1 is steep THEN out is large
IF amp1 is medium AND dur1 is sharpish AND slope1 is steep THEN out is large
IF amp1 is large AND dur1 is spiky THEN out is large
IF amp1 is large AND dur1 is sharpish THEN out is large
IF amp2 is medium AND dur1 is spiky AND slope2 is steep THEN out is large
IF amp2 is medium AND dur1 is sharpish AND slope2 is steep THEN out is large

# The second half-wave usually dominates a true discharge.
IF amp2 is large AND amp1 is small THEN out is large

# Background and artifact shapes.  A transient buried in the baseline
# envelope is background regardless of its half-wave amplitudes.
IF amp1 is small AND amp2 is small THEN out is small
IF amp_baseline is small THEN out is small
IF dur1 is tiny THEN out is small
IF dur1 is long THEN out is small
IF dura is long AND durb is long THEN out is small
IF slope1 is flat AND slope2 is flat THEN out is small
IF dur2 is long THEN out is small
)";
  return text;
}

const FuzzyRuleBase& default_rulebase() {
  static const FuzzyRuleBase base = parse_rulebase(default_rulebase_text(), "<default>");
  return base;
}

}  // namespace spikedet
