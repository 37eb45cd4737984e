#pragma once

#include <filesystem>
#include <optional>
#include <utility>

#include <Eigen/Core>

#include "pitchblur/core/image.hpp"

namespace pitchblur {

/// Row-major-indexed (rows = height) single-precision displacement planes.
using FlowPlane = Eigen::Array<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense displacement field: frame_a(x, y) ~ frame_b(x + dx, y + dy).
class FlowField {
 public:
  FlowField() = default;
  FlowField(int width, int height);
  FlowField(FlowPlane dx, FlowPlane dy);

  int width() const { return static_cast<int>(dx_.cols()); }
  int height() const { return static_cast<int>(dx_.rows()); }

  FlowPlane& dx() { return dx_; }
  FlowPlane& dy() { return dy_; }
  const FlowPlane& dx() const { return dx_; }
  const FlowPlane& dy() const { return dy_; }

  /// Bitwise equality of both planes (distinguishes -0.0 and NaN payloads).
  bool bit_equal(const FlowField& other) const;

 private:
  FlowPlane dx_;
  FlowPlane dy_;
};

/// How a patch's flow is reduced to the scalar used for ranking.
enum class MagnitudeMode {
  MagnitudeSum,  ///< sum of per-pixel Euclidean norms
  VectorSum,     ///< norm of the summed displacement vector
};

/// Motion score of `region`; MagnitudeSum by default.
double patch_flow_magnitude(const FlowField& flow, const PatchRegion& region,
                            MagnitudeMode mode = MagnitudeMode::MagnitudeSum);

/// Middlebury `.flo`: float magic 202021.25, int32 width, int32 height, then
/// row-major interleaved float32 (dx, dy), all little-endian.
void export_flow(const std::filesystem::path& path, const FlowField& flow);
FlowField import_flow(const std::filesystem::path& path,
                      std::optional<std::pair<int, int>> expected_dims = std::nullopt);

}  // namespace pitchblur
