#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnnlstm/gradient_check.hpp"

namespace cnnlstm::nn {

inline constexpr double kGradCheckTolerance = 1e-5;

/// A named gradient check, e.g. one layer on a random instance.
struct ComponentCheck {
  std::string name;
  std::function<GradCheckReport()> run;
};

/// Embedding, conv1d, relu, maxpool1d, dropout, lstm and dense+BCE, each on
/// small random shapes.
std::vector<ComponentCheck> layer_checks(std::uint64_t seed = 1);

/// The assembled model (single- and two-branch) on a 2-tweet toy batch.
std::vector<ComponentCheck> full_model_checks(std::uint64_t seed = 1);

/// "layers" or "full-model".
std::optional<std::vector<ComponentCheck>> preset_checks(std::string_view preset);

struct SuiteRow {
  std::string component;
  GradCheckReport report;
  bool pass = false;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  bool all_pass() const;
};

SuiteResult run_suite(const std::vector<ComponentCheck>& checks,
                      double tolerance = kGradCheckTolerance);

/// One `PASS|FAIL <component> max_rel_error=...` line per component; failures
/// also name the worst tensor and coordinate.
std::string format_suite(const SuiteResult& result);

}  // namespace cnnlstm::nn
