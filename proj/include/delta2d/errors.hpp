#pragma once

#include <stdexcept>
#include <string>

namespace delta2d {

// Error taxonomy mirrored in CLI exit codes: validation -> 2, budget -> 3,
// calibration regression / non-convergence -> 4.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

class calibration_error : public std::runtime_error {
 public:
  explicit calibration_error(const std::string& msg) : std::runtime_error(msg) {}
};

// 128-bit intermediates everywhere; wraparound is never acceptable.
class overflow_error : public std::runtime_error {
 public:
  explicit overflow_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace delta2d
