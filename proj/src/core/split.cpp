#include "pitchblur/core/split.hpp"

#include <algorithm>

namespace pitchblur {

const char* to_string(SplitStatus status) {
  switch (status) {
    case SplitStatus::Match: return "match";
    case SplitStatus::Mismatch: return "mismatch";
    case SplitStatus::Skipped: return "skipped";
  }
  return "?";
}

SplitReport validate_split(const std::vector<SplitCounts>& observed, const SplitExpectation& expected) {
  SplitReport report;
  if (!expected.enabled) {
    report.overall = SplitStatus::Skipped;
    return report;
  }

  auto find = [](const std::vector<SplitCounts>& v, const std::string& name) {
    auto it = std::find_if(v.begin(), v.end(), [&](const SplitCounts& s) { return s.name == name; });
    return it == v.end() ? nullptr : &*it;
  };

  for (const auto& want : expected.splits) {
    SplitReport::Entry entry{want.name, SplitStatus::Match, {}};
    const SplitCounts* got = find(observed, want.name);
    if (!got) {
      entry.status = SplitStatus::Mismatch;
      entry.message = "split missing";
    } else if (got->sequences != want.sequences) {
      entry.status = SplitStatus::Mismatch;
      entry.message = "sequences " + std::to_string(got->sequences) + " != expected " + std::to_string(want.sequences);
    } else if (got->frames && want.frames && *got->frames != *want.frames) {
      entry.status = SplitStatus::Mismatch;
      entry.message = "frames " + std::to_string(*got->frames) + " != expected " + std::to_string(*want.frames);
    }
    report.entries.push_back(std::move(entry));
  }
  for (const auto& got : observed) {
    if (!find(expected.splits, got.name))
      report.entries.push_back({got.name, SplitStatus::Mismatch, "unexpected split"});
  }

  const bool any_mismatch = std::any_of(report.entries.begin(), report.entries.end(),
                                        [](const auto& e) { return e.status == SplitStatus::Mismatch; });
  report.overall = any_mismatch ? SplitStatus::Mismatch : SplitStatus::Match;
  return report;
}

}  // namespace pitchblur
