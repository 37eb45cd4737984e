#pragma once

#include <map>
#include <string>
#include <vector>

#include "pitchblur/core/error.hpp"
#include "pitchblur/pipeline/config.hpp"

namespace pitchblur {

/// A stage failed at run time. The CLI maps this to exit code 2.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct StageSummary {
  std::string name;
  std::map<std::string, std::string> outputs;  ///< path relative to the output dir -> sha256
  std::vector<std::string> notes;
};

struct RunSummary {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;  ///< role or role/file -> sha256
  std::vector<StageSummary> stages;
  std::string split_status;  ///< "match", "mismatch" or "skipped"
  std::vector<std::string> split_notes;
  bool ok = true;
  std::string failed_stage;
  std::string error;
};

/// Runs the enabled stages in order (enhance, flow, augment, sync,
/// calibrate, eval) and writes `<output>/run_manifest.json`. A failing
/// stage is recorded in the manifest, then rethrown as StageError.
RunSummary run_pipeline(const PipelineConfig& cfg, unsigned threads);

/// JSON text of the run manifest. Worker count is deliberately absent.
std::string run_manifest_json(const RunSummary& summary);

struct ShardSummary {
  std::size_t input_frames = 0;
  std::size_t output_frames = 0;
  std::vector<std::int64_t> excluded;         ///< frames without pseudo ground truth
  std::vector<std::int64_t> unmatched_poses;  ///< pseudo ground truth without a frame
  std::map<std::string, std::string> outputs;
};

/// Builds an in-the-wild training shard: keeps frames that have pseudo
/// ground-truth keypoints, blurs them with flow-guided patch selection and
/// writes `frames/`, `keypoints.csv`, `manifest.jsonl` and `exclusions.txt`
/// under `out_dir`.
ShardSummary ingest_itw(const Path& frames_dir, const Path& pseudo_gt, const BlurConfig& blur,
                        const FlowParams& flow, const Path& out_dir, unsigned threads);

}  // namespace pitchblur
