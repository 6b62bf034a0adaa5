// The acceptance suite: every release criterion with its tolerance pinned in
// code, runnable as a whole or filtered by id / keyword.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace holo {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured numbers
  double seconds = 0.0;
};

// Runs the listed criteria (all ten when `only` is empty). `only` entries are
// matched against the id or a substring of the name. `on_result`, when set,
// streams each result as it completes.
std::vector<CriterionResult> run_acceptance(
    const std::vector<std::string>& only = {},
    const std::function<void(const CriterionResult&)>& on_result = nullptr);

}  // namespace holo
