#include "pitchblur/core/image.hpp"

#include <algorithm>
#include <cmath>

namespace pitchblur {

Frame::Frame(std::int64_t id, RgbImage rgb) : id_(id), rgb_(std::move(rgb)) {
  if (rgb_.empty()) throw ValidationError("frame " + std::to_string(id) + " has no pixels");
  if (rgb_.channels() != 3) throw ValidationError("frame " + std::to_string(id) + " is not 3-channel RGB");
}

FrameSequence::FrameSequence(std::vector<Frame> frames, std::string source_tag)
    : frames_(std::move(frames)), source_tag_(std::move(source_tag)) {
  for (std::size_t i = 1; i < frames_.size(); ++i) {
    if (frames_[i].id() <= frames_[i - 1].id())
      throw ValidationError("frame ids must be strictly increasing");
    if (frames_[i].width() != frames_[0].width() || frames_[i].height() != frames_[0].height())
      throw ValidationError("mixed resolutions");
  }
}

void check_region(const PatchRegion& r, int width, int height) {
  if (r.w <= 0 || r.h <= 0) throw ValidationError("region has non-positive size");
  if (r.x < 0 || r.y < 0 || r.x + r.w > width || r.y + r.h > height)
    throw ValidationError("region out of bounds");
}

void check_box(const BoundingBox& box, int width, int height) {
  if (!(box.w > 0) || !(box.h > 0))
    throw ValidationError("bounding box for frame " + std::to_string(box.frame_id) + " has non-positive size");
  const double x0 = std::max(box.x, 0.0);
  const double y0 = std::max(box.y, 0.0);
  const double x1 = std::min(box.x + box.w, static_cast<double>(width));
  const double y1 = std::min(box.y + box.h, static_cast<double>(height));
  if (!(x1 > x0) || !(y1 > y0))
    throw ValidationError("bounding box for frame " + std::to_string(box.frame_id) + " does not intersect the frame");
}

}  // namespace pitchblur
