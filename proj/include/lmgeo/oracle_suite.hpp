#pragma once

#include <cstdint>

namespace lmgeo {

struct OracleSummary {
  int sections = 0;
  /// max |mario - classical| / (1 + |classical|)
  double max_residual = 0.0;
};

/// Mario-vs-classical comparison on the constant-curvature models and on `trials` random
/// landmark sections (N in {2,3,4}, D in {1,2,3}, gaussian and matern-3/2, separation 0.3).
[[nodiscard]] OracleSummary run_oracle_suite(int trials, std::uint64_t seed);

}  // namespace lmgeo
