#pragma once

#include <stdexcept>
#include <string>

namespace cola {

// Wrong dimensions, malformed rule strings, out-of-range hyperparameters.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A NaN/Inf showed up during evaluation or a linear system was singular.
// `coordinate` is the offending output/input index when one is known, else -1.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, int coordinate = -1,
                        bool diverged = false)
      : std::runtime_error(what), coordinate_(coordinate), diverged_(diverged) {}

  int coordinate() const { return coordinate_; }
  // True when the failure is an overflow of an iterated update (HOLA at large
  // look-ahead rates, runaway trajectories). Evaluation code records these.
  bool diverged() const { return diverged_; }

 private:
  int coordinate_;
  bool diverged_;
};

// Malformed or truncated checkpoint / CSV / config content.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cola
