#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "pitchblur/core/image.hpp"
#include "pitchblur/core/pose.hpp"

namespace pitchblur {

/// Gains on the spatial (mean squared joint error) and angular (one minus
/// cosine similarity) terms of the frame-to-pose matching cost.
struct SyncWeights {
  double spatial = 1.0;
  double temporal = 1.0;
};

void validate(const SyncWeights& w);

struct AlignedPair {
  std::size_t gt = 0;    ///< index into the ground-truth track
  std::size_t pred = 0;  ///< index into the estimated track / frame sequence
  double cost = 0;

  bool operator==(const AlignedPair&) const = default;
};

/// Monotone one-to-one matching; total_cost is the sum of the pair costs.
struct Alignment {
  std::vector<AlignedPair> pairs;
  double total_cost = 0;
};

/// spatial * (1/J) sum_j |gt_j - pred_j|^2 + temporal * (1 - cos(flat(gt), flat(pred))).
/// A zero vector has cosine 0 with anything.
double pose_pair_cost(const Pose& gt, const Pose& pred, const SyncWeights& w = {});

/// Minimum-cost monotone injection of the shorter track into the longer one.
/// Every pose of the shorter track is matched; only the longer track may skip.
/// Among equal-cost alignments the lexicographically smallest pair list wins.
Alignment align_sequences(const PoseTrack& gt, const PoseTrack& pred, const SyncWeights& w = {});

/// Frames whose indices appear as `pred` in the alignment, in order.
FrameSequence trim_unannotated(const FrameSequence& seq, const Alignment& alignment);

/// Equal-width histogram of the pair costs over [min, max].
struct CostHistogram {
  double lo = 0;
  double hi = 0;
  std::vector<std::size_t> counts;
};
CostHistogram cost_histogram(const Alignment& alignment, std::size_t bins);

/// Lines `gt_index,pred_index,pair_cost`, then `total_cost,<value>`.
void write_alignment(std::ostream& out, const Alignment& alignment);

}  // namespace pitchblur
