#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vga {

/// Malformed input text (CSV or JSON) that cannot be turned into a dataset.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dataset or request that parsed fine but breaks a data invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

/// The requested program cannot be solved for this unit (zero data for the
/// assessed DMU, infeasible SIC scalar, ...).
class AssessmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The simplex gave up: tiny pivots kept recurring or the iteration cap hit.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vga
