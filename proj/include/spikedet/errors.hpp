#pragma once

#include <stdexcept>
#include <string>

namespace spikedet {

// All library failures derive from Error. category() feeds the CLI's
// one-line diagnostics; exit_code() groups usage/config problems (2)
// apart from runtime failures (1).
class Error : public std::runtime_error {
public:
  Error(std::string category, const std::string& msg, int exit_code = 1)
      : std::runtime_error(msg), category_(std::move(category)), exit_code_(exit_code) {}
  const std::string& category() const { return category_; }
  int exit_code() const { return exit_code_; }

private:
  std::string category_;
  int exit_code_;
};

struct FormatError : Error {
  explicit FormatError(const std::string& msg) : Error("format", msg) {}
};
struct IntegrityError : Error {
  explicit IntegrityError(const std::string& msg) : Error("integrity", msg) {}
};
struct RangeError : Error {
  explicit RangeError(const std::string& msg) : Error("range", msg) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("config", msg, 2) {}
};
struct SpecError : Error {
  explicit SpecError(const std::string& msg) : Error("spec", msg, 2) {}
};
struct ScaleError : Error {
  explicit ScaleError(const std::string& msg) : Error("scale", msg) {}
};
struct InputError : Error {
  explicit InputError(const std::string& msg) : Error("input", msg) {}
};
struct DegenerateEventError : Error {
  explicit DegenerateEventError(const std::string& msg) : Error("degenerate-event", msg) {}
};
struct LabelError : Error {
  explicit LabelError(const std::string& msg) : Error("label", msg) {}
};
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error("io", msg) {}
};

}  // namespace spikedet
