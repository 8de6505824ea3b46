#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "distval/scenario.hpp"

namespace distval {

// heaviside, sin-recip, log-spiral, example1, example2, example3, radial-xy,
// moment-expansion.
const std::vector<std::string>& reproduce_targets();

// Runs a canned construction and checks it against fixed thresholds. The
// report verdict is Pass or Fail; a failed check gives exit code 1. Throws
// std::invalid_argument for an unknown name.
Report reproduce(std::string_view name, const RunOptions& opt = {});

}  // namespace distval
