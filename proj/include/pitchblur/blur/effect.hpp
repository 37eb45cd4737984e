#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "pitchblur/blur/kernel.hpp"
#include "pitchblur/core/image.hpp"

namespace pitchblur {

enum class EffectKind { None, BinaryMask, GaussianBlur, MotionBlur };

const char* to_string(EffectKind kind);
EffectKind parse_effect(std::string_view text);

struct NoEffect {};
struct MaskEffect {};
struct GaussianEffect {
  double sigma = 2.0;
};
struct MotionEffect {
  MotionKernel kernel;
};

using PatchEffect = std::variant<NoEffect, MaskEffect, GaussianEffect, MotionEffect>;

/// Returns a copy of `frame` with `effect` applied inside `region`. Filters
/// convolve each channel with the region edge-replicated for the apron and
/// round half away from zero once at the end.
Frame apply_patch_effect(const Frame& frame, const PatchRegion& region, const PatchEffect& effect);

/// In-place variant used by the augmentation loop.
void apply_patch_effect(RgbImage& image, const PatchRegion& region, const PatchEffect& effect);

/// 2-D convolution of the region with `kernel` (odd square), same border
/// and rounding policy as apply_patch_effect.
void convolve_region(RgbImage& image, const PatchRegion& region, const KernelWeights& kernel);

}  // namespace pitchblur
