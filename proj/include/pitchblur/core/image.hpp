#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pitchblur/core/error.hpp"

namespace pitchblur {

/// Interleaved row-major raster with a fixed channel count.
template <typename T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, int channels, T fill = T{})
      : width_(width), height_(height), channels_(channels) {
    if (width <= 0 || height <= 0 || channels <= 0)
      throw ValidationError("raster dimensions must be positive");
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y, int c) { return data_[index(x, y, c)]; }
  const T& operator()(int x, int y, int c) const { return data_[index(x, y, c)]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  bool same_shape(const Raster& other) const {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }

  bool operator==(const Raster&) const = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

using RgbImage = Raster<std::uint8_t>;
using LabImage = Raster<float>;

/// One video frame: an 8-bit RGB raster tagged with its index in the clip.
class Frame {
 public:
  Frame() = default;
  Frame(std::int64_t id, RgbImage rgb);

  std::int64_t id() const { return id_; }
  int width() const { return rgb_.width(); }
  int height() const { return rgb_.height(); }
  const RgbImage& rgb() const { return rgb_; }
  RgbImage& rgb() { return rgb_; }

  bool operator==(const Frame&) const = default;

 private:
  std::int64_t id_ = 0;
  RgbImage rgb_;
};

/// Ordered clip of same-sized frames with strictly increasing ids.
class FrameSequence {
 public:
  FrameSequence() = default;
  explicit FrameSequence(std::vector<Frame> frames, std::string source_tag = "dataset");

  const std::vector<Frame>& frames() const { return frames_; }
  std::size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }
  const Frame& operator[](std::size_t i) const { return frames_[i]; }
  const std::string& source_tag() const { return source_tag_; }

  bool operator==(const FrameSequence&) const = default;

 private:
  std::vector<Frame> frames_;
  std::string source_tag_ = "dataset";
};

/// Axis-aligned pixel rectangle. `index` is the patch number k in row-major
/// tiling order when the region comes from a patch partition.
struct PatchRegion {
  int index = 0;
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool operator==(const PatchRegion&) const = default;
};

/// Throws ValidationError unless `region` is non-empty and lies inside a
/// width x height raster.
void check_region(const PatchRegion& region, int width, int height);

/// Detector output for one frame, in pixels.
struct BoundingBox {
  std::int64_t frame_id = 0;
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;
};

/// Throws ValidationError unless the box has positive size and overlaps the
/// width x height frame rectangle.
void check_box(const BoundingBox& box, int width, int height);

}  // namespace pitchblur
