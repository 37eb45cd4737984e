#include "pitchblur/core/pose.hpp"

#include <algorithm>

#include "pitchblur/core/error.hpp"

namespace pitchblur {

PoseTrack::PoseTrack(int dims, std::vector<std::string> joint_names, std::vector<Pose> poses)
    : dims_(dims), joint_names_(std::move(joint_names)), poses_(std::move(poses)) {
  if (dims_ != 2 && dims_ != 3) throw ValidationError("pose dimensionality must be 2 or 3");
  if (joint_names_.empty()) throw ValidationError("pose track needs at least one joint");
  const auto joints = static_cast<Eigen::Index>(joint_names_.size());
  for (std::size_t i = 0; i < poses_.size(); ++i) {
    const Pose& p = poses_[i];
    if (p.joints.rows() != joints || p.joints.cols() != dims_)
      throw ValidationError("inconsistent J across rows");
    if (!p.joints.allFinite())
      throw ValidationError("non-finite coordinate in frame " + std::to_string(p.frame_id));
    if (i > 0 && p.frame_id <= poses_[i - 1].frame_id) throw ValidationError("non-monotone frame ids");
  }
}

const Pose* PoseTrack::find(std::int64_t frame_id) const {
  auto it = std::lower_bound(poses_.begin(), poses_.end(), frame_id,
                             [](const Pose& p, std::int64_t id) { return p.frame_id < id; });
  if (it == poses_.end() || it->frame_id != frame_id) return nullptr;
  return &*it;
}

std::vector<std::string> default_joint_names(int count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (int j = 0; j < count; ++j) names.push_back("joint" + std::to_string(j));
  return names;
}

}  // namespace pitchblur
