#pragma once

// Full-model finite-difference verification: every entry of every
// trainable parameter of the complete training objective on a tiny scene,
// compared against central differences.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace srf {

struct GradcheckOptions {
  std::uint64_t seed = 0;
  double step = 1e-5;
  double tolerance = 1e-4;
};

struct GradcheckReport {
  bool passed = false;
  int params_checked = 0;
  std::int64_t entries_checked = 0;
  double worst_rel_err = 0.0;
  std::string worst_param;
  std::vector<std::pair<std::string, double>> per_param;  // name, max rel err
};

GradcheckReport run_full_gradcheck(const GradcheckOptions& opts);

}  // namespace srf
