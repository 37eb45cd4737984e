#include "pitchblur/sync/sync.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "pitchblur/core/error.hpp"
#include "pitchblur/core/io.hpp"

namespace pitchblur {

void validate(const SyncWeights& w) {
  if (!(w.spatial >= 0) || !(w.temporal >= 0) || !(w.spatial + w.temporal > 0))
    throw ValidationError("sync weights must be non-negative with a positive sum");
}

double pose_pair_cost(const Pose& gt, const Pose& pred, const SyncWeights& w) {
  if (gt.joints.rows() != pred.joints.rows() || gt.joints.cols() != pred.joints.cols())
    throw ValidationError("pose dimension mismatch");
  const double joints = static_cast<double>(gt.joints.rows());
  const double spatial = (gt.joints - pred.joints).rowwise().squaredNorm().sum() / joints;

  const auto a = gt.joints.reshaped<Eigen::RowMajor>();
  const auto b = pred.joints.reshaped<Eigen::RowMajor>();
  const double denom = a.norm() * b.norm();
  const double cosine = denom > 0 ? a.dot(b) / denom : 0.0;
  return w.spatial * spatial + w.temporal * (1.0 - cosine);
}

Alignment align_sequences(const PoseTrack& gt, const PoseTrack& pred, const SyncWeights& w) {
  validate(w);
  if (gt.empty() || pred.empty()) throw ValidationError("empty track");
  if (gt.joint_count() != pred.joint_count() || gt.dims() != pred.dims())
    throw ValidationError("J/gamma mismatch between tracks");

  const bool gt_shorter = gt.size() <= pred.size();
  const PoseTrack& shorter = gt_shorter ? gt : pred;
  const PoseTrack& longer = gt_shorter ? pred : gt;
  const std::size_t m = shorter.size();
  const std::size_t n = longer.size();

  auto cost = [&](std::size_t i, std::size_t j) {
    return gt_shorter ? pose_pair_cost(shorter[i], longer[j], w) : pose_pair_cost(longer[j], shorter[i], w);
  };

  // suffix[i][j]: best cost of placing shorter[i..m) into longer[j..n).
  // Solving from the back lets the forward walk take the earliest match on
  // ties, which yields the lexicographically smallest pair list.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t stride = n + 1;
  std::vector<double> suffix((m + 1) * stride, kInf);
  std::vector<double> pair_cost(m * n, 0.0);
  for (std::size_t j = 0; j <= n; ++j) suffix[m * stride + j] = 0.0;
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t j = n; j-- > 0;) {
      if (n - j < m - i) continue;
      pair_cost[i * n + j] = cost(i, j);
      const double take = pair_cost[i * n + j] + suffix[(i + 1) * stride + j + 1];
      const double skip = suffix[i * stride + j + 1];
      suffix[i * stride + j] = std::min(take, skip);
    }
  }

  Alignment out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < m; ++i) {
    while (pair_cost[i * n + j] + suffix[(i + 1) * stride + j + 1] > suffix[i * stride + j + 1]) ++j;
    const double c = pair_cost[i * n + j];
    out.pairs.push_back(gt_shorter ? AlignedPair{i, j, c} : AlignedPair{j, i, c});
    ++j;
  }
  for (const auto& p : out.pairs) out.total_cost += p.cost;
  return out;
}

FrameSequence trim_unannotated(const FrameSequence& seq, const Alignment& alignment) {
  if (alignment.pairs.empty()) throw ValidationError("empty alignment");
  std::vector<Frame> kept;
  kept.reserve(alignment.pairs.size());
  for (const auto& p : alignment.pairs) {
    if (p.pred >= seq.size())
      throw ValidationError("alignment index " + std::to_string(p.pred) + " out of range for " +
                            std::to_string(seq.size()) + " frames");
    kept.push_back(seq[p.pred]);
  }
  return FrameSequence(std::move(kept), seq.source_tag());
}

CostHistogram cost_histogram(const Alignment& alignment, std::size_t bins) {
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  CostHistogram h;
  h.counts.assign(bins, 0);
  if (alignment.pairs.empty()) return h;
  auto [lo, hi] = std::minmax_element(alignment.pairs.begin(), alignment.pairs.end(),
                                      [](const auto& a, const auto& b) { return a.cost < b.cost; });
  h.lo = lo->cost;
  h.hi = hi->cost;
  const double width = (h.hi - h.lo) / static_cast<double>(bins);
  for (const auto& p : alignment.pairs) {
    std::size_t b = width > 0 ? static_cast<std::size_t>((p.cost - h.lo) / width) : 0;
    h.counts[std::min(b, bins - 1)]++;
  }
  return h;
}

void write_alignment(std::ostream& out, const Alignment& alignment) {
  for (const auto& p : alignment.pairs) out << p.gt << ',' << p.pred << ',' << format_real(p.cost) << '\n';
  out << "total_cost," << format_real(alignment.total_cost) << '\n';
}

}  // namespace pitchblur
