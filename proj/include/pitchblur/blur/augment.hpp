#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pitchblur/blur/effect.hpp"
#include "pitchblur/blur/kernel.hpp"
#include "pitchblur/blur/patches.hpp"
#include "pitchblur/flow/flow_field.hpp"

namespace pitchblur {

/// Patch-blur generation policy. Defaults: motion blur with 2 filters on the
/// 3 most-moving 30-pixel patches.
struct BlurConfig {
  PatchMode patch_mode = FixedMode{30};
  int n_patches = 3;
  int n_filters = 2;  ///< 0 draws a fresh kernel per selected patch
  std::pair<int, int> kernel_size_range{5, 15};
  std::pair<double, double> angle_range{0.0, 6.283185307179586};  // [0, 2 pi)
  std::pair<double, double> scale_range{0.8, 1.2};
  EffectKind effect = EffectKind::MotionBlur;
  double gaussian_sigma = 2.0;
  MagnitudeMode magnitude = MagnitudeMode::MagnitudeSum;
  KernelMatrix kernel_matrix = KernelMatrix::Centered;
  std::uint64_t seed = 0;
};

/// All invariant violations, empty when valid.
std::vector<std::string> check(const BlurConfig& cfg);
/// Throws ValidationError listing every violation.
void validate(const BlurConfig& cfg);

/// Canonical JSON text of the configuration (stable key order).
std::string canonical_json(const BlurConfig& cfg);
/// sha256 of canonical_json.
std::string config_digest(const BlurConfig& cfg);

struct RegionRecord {
  PatchRegion region;
  double magnitude = 0;
  EffectKind effect = EffectKind::None;
  int kernel_size = 0;  ///< motion blur only
  double angle = 0;
  double scale = 1;
  double sigma = 0;     ///< gaussian blur only

  bool operator==(const RegionRecord&) const = default;
};

struct FrameRecord {
  std::int64_t frame_id = 0;
  std::uint64_t seed = 0;        ///< configuration seed
  std::uint64_t frame_seed = 0;  ///< derived per-frame stream seed
  std::string config_digest;
  std::vector<RegionRecord> regions;

  bool operator==(const FrameRecord&) const = default;
};

using AugmentationManifest = std::vector<FrameRecord>;

struct AugmentResult {
  FrameSequence frames;
  AugmentationManifest manifest;
};

/// Draws the kernels for one frame from the configured ranges.
std::vector<MotionKernel> draw_kernels(const BlurConfig& cfg, std::int64_t frame_id, int count);

/// Augments every frame that has a forward flow (flows[i] pairs frames i and
/// i+1); the final frame passes through. Frames are processed on up to
/// `threads` workers and the output does not depend on the worker count.
AugmentResult augment_sequence(const FrameSequence& seq, std::span<const FlowField> flows, const BlurConfig& cfg,
                               unsigned threads = 1);

/// Re-applies recorded effects to `seq`. Frames without a record pass
/// through unchanged.
FrameSequence replay_manifest(const FrameSequence& seq, const AugmentationManifest& manifest,
                              KernelMatrix matrix = KernelMatrix::Centered);

/// One JSON object per line.
void write_manifest(std::ostream& out, const AugmentationManifest& manifest);
AugmentationManifest read_manifest(std::istream& in);

}  // namespace pitchblur
