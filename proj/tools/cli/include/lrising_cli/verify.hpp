#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace lrising::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool quick = false;
  std::uint64_t seed = 1;
  std::size_t workers = 0;
};

/// The invariant suite behind `lrising verify`. A check that throws counts
/// as failed with the exception text as detail.
std::vector<CheckResult> run_verify(const VerifyOptions& options);

/// Fixed-width pass/fail table.
std::string format_checks(const std::vector<CheckResult>& checks);

}  // namespace lrising::cli
