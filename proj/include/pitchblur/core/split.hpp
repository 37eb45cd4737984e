#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pitchblur {

struct SplitCounts {
  std::string name;
  std::int64_t sequences = 0;
  std::optional<std::int64_t> frames;
};

/// Reference split sizes. Defaults are the train/validation/test counts of
/// the original pitch dataset.
struct SplitExpectation {
  bool enabled = true;
  std::vector<SplitCounts> splits = {
      {"train", 105, 21050},
      {"validation", 15, 2962},
      {"test", 30, 5988},
  };
};

enum class SplitStatus { Match, Mismatch, Skipped };

struct SplitReport {
  struct Entry {
    std::string name;
    SplitStatus status = SplitStatus::Match;
    std::string message;
  };
  SplitStatus overall = SplitStatus::Match;
  std::vector<Entry> entries;
};

/// Advisory comparison of observed split sizes with the expectation. Never
/// throws; a split missing from either side is reported as a mismatch.
SplitReport validate_split(const std::vector<SplitCounts>& observed, const SplitExpectation& expected);

const char* to_string(SplitStatus status);

}  // namespace pitchblur
