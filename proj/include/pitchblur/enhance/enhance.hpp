#pragma once

#include "pitchblur/core/image.hpp"

namespace pitchblur {

struct EnhanceConfig {
  double margin = 0.0;      ///< padding added on each side, as a fraction of box size
  double clip_limit = 2.0;  ///< histogram clip, in multiples of the uniform bin height
  int tile_rows = 8;
  int tile_cols = 8;
};

void validate(const EnhanceConfig& cfg);

/// Sub-image inside the padded box [x - m w, x + w + m w) x [y - m h, y + h + m h),
/// expanded outward to whole pixels and clipped to the frame. Keeps the frame id.
Frame crop(const Frame& frame, const BoundingBox& box, double margin);

/// sRGB (D65) to CIELAB; channels are L* in [0, 100], a*, b*.
LabImage rgb_to_lab(const RgbImage& rgb);
/// Inverse conversion, rounding half away from zero and clamping to [0, 255].
RgbImage lab_to_rgb(const LabImage& lab);

/// Contrast-limited adaptive histogram equalization of L* with bilinear
/// blending between tile mappings. a* and b* are copied untouched; an image
/// of constant L* is returned unchanged.
LabImage enhance_luminosity(const LabImage& lab, const EnhanceConfig& cfg = {});

/// crop -> LAB -> enhance_luminosity -> RGB.
Frame enhance_frame(const Frame& frame, const BoundingBox& box, const EnhanceConfig& cfg = {});

}  // namespace pitchblur
