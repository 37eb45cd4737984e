#include "pitchblur/blur/augment.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "pitchblur/core/error.hpp"
#include "pitchblur/core/hash.hpp"
#include "pitchblur/core/parallel.hpp"
#include "pitchblur/core/random.hpp"

namespace pitchblur {
namespace {

PatchEffect effect_for(const RegionRecord& r, KernelMatrix matrix) {
  switch (r.effect) {
    case EffectKind::None: return NoEffect{};
    case EffectKind::BinaryMask: return MaskEffect{};
    case EffectKind::GaussianBlur: return GaussianEffect{r.sigma};
    case EffectKind::MotionBlur: return MotionEffect{build_motion_kernel(r.kernel_size, r.angle, r.scale, matrix)};
  }
  return NoEffect{};
}

}  // namespace

std::vector<std::string> check(const BlurConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.n_patches < 1) errors.push_back("patches must be >= 1");
  if (cfg.n_filters < 0) errors.push_back("filters must be >= 0");

  const auto [kmin, kmax] = cfg.kernel_size_range;
  if (kmin < 3 || kmin % 2 == 0 || kmax % 2 == 0 || kmin > kmax)
    errors.push_back("kernel size range must be odd values >= 3 with min <= max");
  const auto [amin, amax] = cfg.angle_range;
  if (!std::isfinite(amin) || !std::isfinite(amax) || amin > amax) errors.push_back("angle range must satisfy min <= max");
  const auto [smin, smax] = cfg.scale_range;
  if (!(smin > 0) || !std::isfinite(smax) || smin > smax)
    errors.push_back("scale range must be positive with min <= max");
  if (!(cfg.gaussian_sigma > 0)) errors.push_back("gaussian sigma must be positive");

  if (const auto* g = std::get_if<GridMode>(&cfg.patch_mode)) {
    if (g->rows < 1 || g->cols < 1)
      errors.push_back("grid dimensions must be >= 1");
    else if (cfg.n_patches > g->rows * g->cols)
      errors.push_back("N exceeds patch count (" + std::to_string(cfg.n_patches) + " > " +
                       std::to_string(g->rows * g->cols) + ")");
  } else if (std::get<FixedMode>(cfg.patch_mode).size < 1) {
    errors.push_back("patch size must be >= 1");
  }
  return errors;
}

void validate(const BlurConfig& cfg) {
  const auto errors = check(cfg);
  if (errors.empty()) return;
  std::string message = "invalid blur configuration:";
  for (const auto& e : errors) message += "\n  " + e;
  throw ValidationError(message);
}

std::string canonical_json(const BlurConfig& cfg) {
  nlohmann::json j;
  j["patch_mode"] = to_string(cfg.patch_mode);
  j["patches"] = cfg.n_patches;
  j["filters"] = cfg.n_filters;
  j["kernel_size"] = {cfg.kernel_size_range.first, cfg.kernel_size_range.second};
  j["angle"] = {cfg.angle_range.first, cfg.angle_range.second};
  j["scale"] = {cfg.scale_range.first, cfg.scale_range.second};
  j["effect"] = to_string(cfg.effect);
  j["gaussian_sigma"] = cfg.gaussian_sigma;
  j["magnitude"] = cfg.magnitude == MagnitudeMode::MagnitudeSum ? "magnitude_sum" : "vector_sum";
  j["paper_matrix"] = cfg.kernel_matrix == KernelMatrix::Printed;
  j["seed"] = cfg.seed;
  return j.dump();
}

std::string config_digest(const BlurConfig& cfg) { return sha256_hex(canonical_json(cfg)); }

std::vector<MotionKernel> draw_kernels(const BlurConfig& cfg, std::int64_t frame_id, int count) {
  Rng rng(derive_seed(cfg.seed, frame_id));
  const auto [kmin, kmax] = cfg.kernel_size_range;
  const auto choices = static_cast<std::uint64_t>((kmax - kmin) / 2 + 1);
  std::vector<MotionKernel> kernels;
  kernels.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int size = kmin + 2 * static_cast<int>(rng.index(choices));
    const double angle = rng.uniform(cfg.angle_range.first, cfg.angle_range.second);
    const double scale = rng.uniform(cfg.scale_range.first, cfg.scale_range.second);
    kernels.push_back(build_motion_kernel(size, angle, scale, cfg.kernel_matrix));
  }
  return kernels;
}

AugmentResult augment_sequence(const FrameSequence& seq, std::span<const FlowField> flows, const BlurConfig& cfg,
                               unsigned threads) {
  validate(cfg);
  const std::size_t pairs = seq.empty() ? 0 : seq.size() - 1;
  if (flows.size() != pairs)
    throw ValidationError("flow/frame count mismatch: " + std::to_string(flows.size()) + " flows for " +
                          std::to_string(seq.size()) + " frames");
  if (seq.empty()) return {seq, {}};

  const int width = seq[0].width();
  const int height = seq[0].height();
  for (const auto& f : flows)
    if (f.width() != width || f.height() != height) throw ValidationError("flow dimensions differ from frames");

  const auto regions = init_patches(width, height, cfg.patch_mode);
  if (static_cast<std::size_t>(cfg.n_patches) > regions.size())
    throw ValidationError("N exceeds patch count (" + std::to_string(cfg.n_patches) + " > " +
                          std::to_string(regions.size()) + ")");
  const std::string digest = config_digest(cfg);

  std::vector<Frame> frames = seq.frames();
  AugmentationManifest manifest(pairs);

  parallel_for(0, pairs, threads, [&](std::size_t t) {
    Frame& frame = frames[t];
    const auto selected = select_ranked(regions, flows[t], cfg.n_patches, cfg.magnitude);

    std::vector<MotionKernel> kernels;
    if (cfg.effect == EffectKind::MotionBlur)
      kernels = draw_kernels(cfg, frame.id(), cfg.n_filters > 0 ? cfg.n_filters : cfg.n_patches);

    FrameRecord& record = manifest[t];
    record.frame_id = frame.id();
    record.seed = cfg.seed;
    record.frame_seed = derive_seed(cfg.seed, frame.id());
    record.config_digest = digest;

    for (std::size_t i = 0; i < selected.size(); ++i) {
      RegionRecord r{selected[i].region, selected[i].magnitude, cfg.effect};
      PatchEffect effect = NoEffect{};
      switch (cfg.effect) {
        case EffectKind::None: break;
        case EffectKind::BinaryMask: effect = MaskEffect{}; break;
        case EffectKind::GaussianBlur:
          r.sigma = cfg.gaussian_sigma;
          effect = GaussianEffect{cfg.gaussian_sigma};
          break;
        case EffectKind::MotionBlur: {
          const MotionKernel& k = kernels[i % kernels.size()];
          r.kernel_size = k.size;
          r.angle = k.angle;
          r.scale = k.scale;
          effect = MotionEffect{k};
          break;
        }
      }
      apply_patch_effect(frame.rgb(), r.region, effect);
      record.regions.push_back(r);
    }
  });

  return {FrameSequence(std::move(frames), seq.source_tag()), std::move(manifest)};
}

FrameSequence replay_manifest(const FrameSequence& seq, const AugmentationManifest& manifest, KernelMatrix matrix) {
  std::vector<Frame> frames = seq.frames();
  for (const auto& record : manifest) {
    auto it = std::find_if(frames.begin(), frames.end(), [&](const Frame& f) { return f.id() == record.frame_id; });
    if (it == frames.end())
      throw ValidationError("manifest references missing frame " + std::to_string(record.frame_id));
    for (const auto& r : record.regions) apply_patch_effect(it->rgb(), r.region, effect_for(r, matrix));
  }
  return FrameSequence(std::move(frames), seq.source_tag());
}

}  // namespace pitchblur
