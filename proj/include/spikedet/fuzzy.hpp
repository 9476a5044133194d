#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "spikedet/types.hpp"

namespace spikedet {

struct MembershipFunction {
  enum Kind { triangular, trapezoidal } kind = triangular;
  std::array<double, 4> b{};  // triangles use b[0..2]

  double operator()(double x) const;
};

struct FuzzyRule {
  enum Connective { AND, OR } connective = AND;
  std::vector<std::pair<std::string, std::string>> terms;  // (feature, set name)
  std::string consequent;                                  // output set name
  int line = 0;
};

struct FuzzyRuleBase {
  std::map<std::string, std::map<std::string, MembershipFunction>> inputs;
  std::map<std::string, MembershipFunction> outputs;  // small, medium, large
  std::vector<FuzzyRule> rules;
};

inline constexpr int kAggregateGrid = 1001;

struct ClassifierResult {
  double score = 0.0;
  bool rule_fired = false;
  EventClass cls = EventClass::non_epileptiform;
};

double membership(double x, const MembershipFunction& mf);

// Feature vector keyed for rule evaluation: amp1, amp2, amp_baseline, dura,
// durb, dur1, dur2, slope1, slope2.
double feature_value(const FeatureVector& f, const std::string& name);

// Degree to which one rule's antecedent holds (min over AND terms, max over
// OR terms).
double antecedent_degree(const FuzzyRule& rule, const FeatureVector& f,
                         const FuzzyRuleBase& base);

// Mamdani inference: clip each rule's consequent at its antecedent degree
// (min implication), aggregate pointwise max on a 1001-point grid over [0,1].
Eigen::VectorXd infer(const FeatureVector& f, const FuzzyRuleBase& base);

// Centroid of the aggregate; an all-zero aggregate yields 0 with fired=false.
double defuzzify_centroid(const Eigen::Ref<const Eigen::VectorXd>& aggregate,
                          bool* fired = nullptr);

ClassifierResult classify(const FeatureVector& f, const FuzzyRuleBase& base,
                          double decision_threshold = 0.8, double possible_floor = 0.5);

// Line-oriented rulebase text:
//   set <feature> <name> tri <a> <b> <c>
//   set <feature> <name> trap <a> <b> <c> <d>
//   set out <small|medium|large> ...
//   IF <feature> is <set> [AND ...] THEN out is <class>
// '#' starts a comment. A rule uses a single connective type.
FuzzyRuleBase parse_rulebase(const std::string& text, const std::string& origin = "<string>");
FuzzyRuleBase load_rulebase(const std::string& path);

// The rulebase compiled into the library; config/default.rules carries the
// same text.
const std::string& default_rulebase_text();
const FuzzyRuleBase& default_rulebase();

}  // namespace spikedet
