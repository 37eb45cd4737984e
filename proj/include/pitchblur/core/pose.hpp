#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pitchblur {

/// J x gamma keypoint matrix; row j holds joint j.
using JointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Pose {
  std::int64_t frame_id = 0;
  JointMatrix joints;

  int joint_count() const { return static_cast<int>(joints.rows()); }
  int dims() const { return static_cast<int>(joints.cols()); }
};

/// Per-frame keypoints of one subject. Every pose shares the track's joint
/// count and dimensionality; frame ids are strictly increasing and frames
/// without annotation are simply absent.
class PoseTrack {
 public:
  PoseTrack() = default;
  PoseTrack(int dims, std::vector<std::string> joint_names, std::vector<Pose> poses);

  int dims() const { return dims_; }
  int joint_count() const { return static_cast<int>(joint_names_.size()); }
  const std::vector<std::string>& joint_names() const { return joint_names_; }
  const std::vector<Pose>& poses() const { return poses_; }
  std::size_t size() const { return poses_.size(); }
  bool empty() const { return poses_.empty(); }
  const Pose& operator[](std::size_t i) const { return poses_[i]; }

  /// Pose with the given frame id, or nullptr.
  const Pose* find(std::int64_t frame_id) const;

  /// Subset of this track whose frame ids satisfy `keep`.
  template <typename Pred>
  PoseTrack filter(Pred keep) const {
    std::vector<Pose> kept;
    for (const auto& p : poses_)
      if (keep(p.frame_id)) kept.push_back(p);
    return PoseTrack(dims_, joint_names_, std::move(kept));
  }

 private:
  int dims_ = 3;
  std::vector<std::string> joint_names_;
  std::vector<Pose> poses_;
};

/// Default 18-joint skeleton names used when a file does not name its joints.
std::vector<std::string> default_joint_names(int count);

}  // namespace pitchblur
