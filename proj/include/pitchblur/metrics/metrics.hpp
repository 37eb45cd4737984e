#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pitchblur/core/pose.hpp"

namespace pitchblur {

struct FrameLoss {
  std::int64_t frame_id = 0;
  double loss = 0;
};

/// Per-frame mean joint distances and their mean over evaluated frames.
struct EvalReport {
  std::vector<FrameLoss> per_frame;
  double aggregate = 0;
  std::size_t frames = 0;
  int joints = 0;
  int dims = 0;
  std::vector<std::int64_t> skipped_pred;  ///< frames only in the prediction
  std::vector<std::int64_t> skipped_gt;    ///< frames only in the ground truth
};

/// Mean per-joint position error over frames present in both tracks. No
/// alignment or root normalization is applied.
EvalReport mpjpe(const PoseTrack& pred, const PoseTrack& gt);

struct ComparisonRow {
  std::string label;
  double loss = 0;
};

/// Runs sorted by ascending aggregate loss (stable for equal losses).
std::vector<ComparisonRow> compare_runs(std::span<const EvalReport> reports, std::span<const std::string> labels);

/// `label,loss` header plus one row per run.
void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// `frame_id,loss` rows, then `aggregate,<value>`.
void write_report_csv(std::ostream& out, const EvalReport& report);
/// Machine-readable form of the report.
std::string report_json(const EvalReport& report);

}  // namespace pitchblur
