#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pitchblur/core/error.hpp"
#include "pitchblur/core/pose.hpp"

namespace pitchblur {

/// Pinhole camera: x_cam = rotation * x_world + translation,
/// (u, v) = focal * (x_cam / z_cam, y_cam / z_cam) + principal.
template <typename Scalar>
struct CameraModel {
  Scalar focal = Scalar(1000);
  Eigen::Matrix<Scalar, 2, 1> principal = Eigen::Matrix<Scalar, 2, 1>::Zero();
  Eigen::Matrix<Scalar, 3, 3> rotation = Eigen::Matrix<Scalar, 3, 3>::Identity();
  Eigen::Matrix<Scalar, 3, 1> translation = Eigen::Matrix<Scalar, 3, 1>::Zero();
};

using Camera = CameraModel<double>;

/// Throws ValidationError unless focal > 0 and rotation is orthonormal with
/// determinant +1 (within 1e-9).
void validate(const Camera& cam);

/// Projects the rows of a J x 3 world-frame point matrix to a J x 2 matrix.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 2> project_points(const Eigen::MatrixBase<Derived>& world,
                                                        const CameraModel<Scalar>& cam) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 2> out(world.rows(), 2);
  for (Eigen::Index j = 0; j < world.rows(); ++j) {
    const Eigen::Matrix<Scalar, 3, 1> pc = cam.rotation * world.row(j).transpose().template cast<Scalar>() + cam.translation;
    if (!(pc.z() > Scalar(0))) throw ValidationError("non-positive depth: joint " + std::to_string(j) + " is behind the camera");
    out(j, 0) = cam.focal * pc.x() / pc.z() + cam.principal.x();
    out(j, 1) = cam.focal * pc.y() / pc.z() + cam.principal.y();
  }
  return out;
}

/// 3-D pose in, 2-D pose (same frame id) out.
Pose project(const Pose& points3d, const Camera& cam);

/// Mean over reference frames of the mean per-joint pixel distance between
/// the projection and the annotation.
double reprojection_loss(const Camera& cam, std::span<const Pose> points3d, std::span<const Pose> annotated2d);
double reprojection_loss(const Camera& cam, const Pose& points3d, const Pose& annotated2d);

enum class GradientMode { Analytic, FiniteDifference };

/// dL/df. Analytic mode lets a joint with zero residual contribute 0; finite
/// difference mode uses a central step of max(1e-6 f, 1e-3).
double loss_gradient(const Camera& cam, std::span<const Pose> points3d, std::span<const Pose> annotated2d,
                     GradientMode mode = GradientMode::Analytic);
double loss_gradient(const Camera& cam, const Pose& points3d, const Pose& annotated2d,
                     GradientMode mode = GradientMode::Analytic);

struct OptimizerConfig {
  double learning_rate = 1e-2;
  int max_iters = 500;
  double tolerance = 1e-8;  ///< stop once an accepted step changes the loss by less
  GradientMode gradient = GradientMode::Analytic;
  bool backtracking = true;         ///< halve rejected steps, grow accepted ones
  bool refine_translation = false;  ///< also descend on the extrinsic translation
};

void validate(const OptimizerConfig& opt);

struct TraceEntry {
  int iteration = 0;
  double focal = 0;
  double loss = 0;
};

struct CalibrationResult {
  Camera camera;
  std::vector<TraceEntry> trace;  ///< entry 0 is the initial state
  bool converged = false;
};

/// Gradient descent on the focal length (f <- f - step * dL/df).
///
/// With backtracking, a step that would raise the loss or leave (0, 1e6) is
/// halved until it does not (the step doubles again after each accepted
/// update), so the trace is non-increasing in loss. Without backtracking the
/// fixed learning rate is used and leaving (0, 1e6) throws.
CalibrationResult optimize_focal(const Camera& cam0, std::span<const Pose> points3d,
                                 std::span<const Pose> annotated2d, const OptimizerConfig& opt = {});
CalibrationResult optimize_focal(const Camera& cam0, const Pose& points3d, const Pose& annotated2d,
                                 const OptimizerConfig& opt = {});

/// 12 reals (row-major rotation, then translation), whitespace or comma separated.
void load_extrinsics(const std::filesystem::path& path, Camera& cam);

/// Text camera file: `f`, `cx`, `cy`, `R` (9 values), `t` (3 values) lines.
void write_camera(std::ostream& out, const Camera& cam);
Camera read_camera(std::istream& in);

/// CSV `iteration,f,loss`.
void write_trace(std::ostream& out, const std::vector<TraceEntry>& trace);

}  // namespace pitchblur
