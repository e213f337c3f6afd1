#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "runner.hpp"

namespace hyg {

struct VerifyOptions {
  int cap = 40;
  std::uint64_t seed = 1;
  int workers = 1;
  /// Criterion ids to run ("AC1", "AC8b", ...); empty means all.
  std::vector<std::string> only;
};

struct CriterionInfo {
  std::string id;
  std::string title;
  int radius_needed = 0;
  double budget_seconds = 0;
};

const std::vector<CriterionInfo>& acceptance_criteria();

/// Runs the acceptance matrix. Criteria whose radius exceeds the cap are
/// reported as skipped. A criterion that overruns its time budget fails.
RunReport verify(const VerifyOptions& opts);

}  // namespace hyg
