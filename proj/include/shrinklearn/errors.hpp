#pragma once

#include <stdexcept>
#include <string>

namespace shrinklearn {

/// Nonfinite values appeared during an iterative computation.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int iteration, const std::string& what)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// A numerical procedure failed (singular system, exhausted retries, ...).
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File reading/writing failure.
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace shrinklearn
