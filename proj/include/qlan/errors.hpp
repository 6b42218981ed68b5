#pragma once

#include <stdexcept>
#include <string>

namespace qlan {

// Invalid user input: bad config values, schema violations, malformed data
// files. The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative numerical method failed to reach its tolerance. The CLI maps
// this to exit code 3.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace qlan
