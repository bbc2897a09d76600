#pragma once

#include <stdexcept>

namespace gaussdev {

// A request that is well-formed but outside an estimator's or bound's
// validity window (e.g. q too large for a negative moment). The CLI maps it
// to exit status 3.
class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gaussdev
