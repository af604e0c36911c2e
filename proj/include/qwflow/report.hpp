#pragma once

#include <string>
#include <vector>

namespace qwflow {

// One checked condition with its worst violation magnitude.
struct ConditionCheck {
  std::string condition;
  bool pass = true;
  double max_violation = 0.0;
};

struct VerifyReport {
  std::vector<ConditionCheck> checks;

  bool all_pass() const {
    for (const ConditionCheck& c : checks)
      if (!c.pass) return false;
    return true;
  }

  const ConditionCheck* find(const std::string& condition) const {
    for (const ConditionCheck& c : checks)
      if (c.condition == condition) return &c;
    return nullptr;
  }
};

}  // namespace qwflow
