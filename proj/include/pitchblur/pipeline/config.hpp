#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pitchblur/blur/augment.hpp"
#include "pitchblur/camera/camera.hpp"
#include "pitchblur/core/split.hpp"
#include "pitchblur/enhance/enhance.hpp"
#include "pitchblur/flow/estimate.hpp"
#include "pitchblur/sync/sync.hpp"

namespace pitchblur {

using Path = std::filesystem::path;

struct EnhanceStage {
  bool enabled = false;
  Path boxes;
  EnhanceConfig params;
};

struct FlowStage {
  bool enabled = false;
  Path import_dir;  ///< when set, `<frame id>.flo` files replace estimation
  FlowParams params;
};

struct AugmentStage {
  bool enabled = false;
  BlurConfig blur;  ///< blur.seed mirrors the top-level seed
};

struct SyncStage {
  bool enabled = false;
  Path gt;
  Path pred;
  SyncWeights weights;
  int histogram_bins = 0;
  bool trim = false;  ///< write the aligned frames of `frames`
};

struct CalibrateStage {
  bool enabled = false;
  Path points3d;
  Path annotation;
  Path extrinsics;
  double initial_focal = 1000.0;
  std::optional<std::pair<double, double>> principal;
  std::optional<std::pair<int, int>> image_size;
  OptimizerConfig optimizer;
};

struct EvalStage {
  bool enabled = false;
  Path pred;
  Path gt;
};

/// Declarative description of a run. Relative paths are resolved against
/// the directory of the configuration file.
struct PipelineConfig {
  std::uint64_t seed = 0;
  Path output = "out";
  Path frames;
  SplitExpectation split;
  std::vector<SplitCounts> observed_split;
  EnhanceStage enhance;
  FlowStage flow;
  AugmentStage augment;
  SyncStage sync;
  CalibrateStage calibrate;
  EvalStage eval;
};

struct ConfigResult {
  std::optional<PipelineConfig> config;
  std::vector<std::string> errors;  ///< every problem found, not just the first

  bool ok() const { return config.has_value(); }
};

/// Parses and validates YAML text. Unknown keys are errors.
ConfigResult parse_config(std::string_view text, const Path& base_dir = {});
/// Reads `path` and calls parse_config; an empty file yields all defaults.
ConfigResult validate_config(const Path& path);

/// Canonical JSON of everything that influences outputs (excludes the
/// output directory).
std::string canonical_json(const PipelineConfig& cfg);
std::string config_digest(const PipelineConfig& cfg);

/// "a:b" range parsing shared with the CLI.
std::pair<double, double> parse_real_range(std::string_view text);
std::pair<int, int> parse_int_range(std::string_view text);
/// "RxC".
std::pair<int, int> parse_tiles(std::string_view text);

}  // namespace pitchblur
