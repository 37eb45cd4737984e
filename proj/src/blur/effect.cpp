#include "pitchblur/blur/effect.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pitchblur/core/error.hpp"

namespace pitchblur {

const char* to_string(EffectKind kind) {
  switch (kind) {
    case EffectKind::None: return "none";
    case EffectKind::BinaryMask: return "binary_mask";
    case EffectKind::GaussianBlur: return "gaussian_blur";
    case EffectKind::MotionBlur: return "motion_blur";
  }
  return "?";
}

EffectKind parse_effect(std::string_view text) {
  if (text == "none") return EffectKind::None;
  if (text == "binary_mask") return EffectKind::BinaryMask;
  if (text == "gaussian_blur") return EffectKind::GaussianBlur;
  if (text == "motion_blur") return EffectKind::MotionBlur;
  throw ValidationError("unknown effect '" + std::string(text) + "'");
}

void convolve_region(RgbImage& image, const PatchRegion& region, const KernelWeights& kernel) {
  check_region(region, image.width(), image.height());
  if (kernel.rows() != kernel.cols() || kernel.rows() % 2 == 0) throw ValidationError("kernel must be odd and square");
  const int size = static_cast<int>(kernel.rows());
  const int c = size / 2;

  // Non-zero taps in row-major order. Skipped taps would add exact zeros, so
  // the sums match a dense loop bit for bit.
  struct Tap {
    int dx, dy;
    double w;
  };
  std::vector<Tap> taps;
  for (int v = 0; v < size; ++v)
    for (int u = 0; u < size; ++u)
      if (kernel(v, u) != 0.0) taps.push_back({u - c, v - c, kernel(v, u)});

  const int w = region.w;
  const int h = region.h;
  const int pw = w + 2 * c;
  const int ph = h + 2 * c;
  std::vector<double> padded(static_cast<std::size_t>(pw) * ph);

  for (int ch = 0; ch < image.channels(); ++ch) {
    for (int y = 0; y < ph; ++y) {
      const int sy = region.y + std::clamp(y - c, 0, h - 1);
      for (int x = 0; x < pw; ++x) {
        const int sx = region.x + std::clamp(x - c, 0, w - 1);
        padded[static_cast<std::size_t>(y) * pw + x] = image(sx, sy, ch);
      }
    }
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double sum = 0;
        // Convolution: the tap at offset (dx, dy) reads the sample at -(dx, dy).
        for (const Tap& t : taps) sum += t.w * padded[static_cast<std::size_t>(y + c - t.dy) * pw + (x + c - t.dx)];
        image(region.x + x, region.y + y, ch) = static_cast<std::uint8_t>(std::clamp(std::round(sum), 0.0, 255.0));
      }
  }
}

void apply_patch_effect(RgbImage& image, const PatchRegion& region, const PatchEffect& effect) {
  check_region(region, image.width(), image.height());
  std::visit(
      [&](const auto& e) {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, MaskEffect>) {
          for (int y = region.y; y < region.y + region.h; ++y)
            for (int x = region.x; x < region.x + region.w; ++x)
              for (int ch = 0; ch < image.channels(); ++ch) image(x, y, ch) = 0;
        } else if constexpr (std::is_same_v<E, GaussianEffect>) {
          convolve_region(image, region, gaussian_kernel(e.sigma));
        } else if constexpr (std::is_same_v<E, MotionEffect>) {
          convolve_region(image, region, e.kernel.weights);
        }
      },
      effect);
}

Frame apply_patch_effect(const Frame& frame, const PatchRegion& region, const PatchEffect& effect) {
  Frame out = frame;
  apply_patch_effect(out.rgb(), region, effect);
  return out;
}

}  // namespace pitchblur
