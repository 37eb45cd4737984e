#include "pitchblur/metrics/metrics.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

#include "pitchblur/core/error.hpp"
#include "pitchblur/core/io.hpp"

namespace pitchblur {

EvalReport mpjpe(const PoseTrack& pred, const PoseTrack& gt) {
  if (pred.joint_count() != gt.joint_count() || pred.dims() != gt.dims())
    throw ValidationError("J/gamma mismatch between prediction and ground truth");

  EvalReport report;
  report.joints = gt.joint_count();
  report.dims = gt.dims();

  std::size_t i = 0, j = 0;
  while (i < pred.size() || j < gt.size()) {
    if (j == gt.size() || (i < pred.size() && pred[i].frame_id < gt[j].frame_id)) {
      report.skipped_pred.push_back(pred[i++].frame_id);
    } else if (i == pred.size() || gt[j].frame_id < pred[i].frame_id) {
      report.skipped_gt.push_back(gt[j++].frame_id);
    } else {
      const double loss = (pred[i].joints - gt[j].joints).rowwise().norm().mean();
      report.per_frame.push_back({gt[j].frame_id, loss});
      ++i;
      ++j;
    }
  }
  if (report.per_frame.empty()) throw ValidationError("zero overlapping frames");

  double total = 0;
  for (const auto& f : report.per_frame) total += f.loss;
  report.frames = report.per_frame.size();
  report.aggregate = total / static_cast<double>(report.frames);
  return report;
}

std::vector<ComparisonRow> compare_runs(std::span<const EvalReport> reports, std::span<const std::string> labels) {
  if (reports.empty()) throw ValidationError("compare_runs needs at least one report");
  if (labels.size() != reports.size()) throw ValidationError("one label per report required");
  std::vector<ComparisonRow> rows;
  for (std::size_t k = 0; k < reports.size(); ++k) rows.push_back({labels[k], reports[k].aggregate});
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.loss < b.loss; });
  return rows;
}

void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "label,loss\n";
  for (const auto& r : rows) out << r.label << ',' << format_real(r.loss) << '\n';
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "frame_id,loss\n";
  for (const auto& f : report.per_frame) out << f.frame_id << ',' << format_real(f.loss) << '\n';
  out << "aggregate," << format_real(report.aggregate) << '\n';
}

std::string report_json(const EvalReport& report) {
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& f : report.per_frame) frames.push_back({{"frame_id", f.frame_id}, {"loss", f.loss}});
  nlohmann::json j{{"aggregate", report.aggregate}, {"frames", report.frames},
                   {"joints", report.joints},       {"gamma", report.dims},
                   {"per_frame", std::move(frames)}, {"skipped_pred", report.skipped_pred},
                   {"skipped_gt", report.skipped_gt}};
  return j.dump(2);
}

}  // namespace pitchblur
