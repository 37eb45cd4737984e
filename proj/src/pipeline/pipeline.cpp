#include "pitchblur/pipeline/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>

#include <json.hpp>

#include "pitchblur/core/hash.hpp"
#include "pitchblur/core/io.hpp"
#include "pitchblur/core/parallel.hpp"
#include "pitchblur/metrics/metrics.hpp"

namespace pitchblur {
namespace {

std::string flo_name(std::int64_t id) {
  auto name = frame_filename(id);
  return name.substr(0, name.size() - 4) + ".flo";
}

/// Records a written file under its path relative to the output root.
class Outputs {
 public:
  Outputs(const Path& root, StageSummary& stage) : root_(root), stage_(stage) {}

  void add(const Path& file) {
    stage_.outputs[std::filesystem::relative(file, root_).generic_string()] = sha256_file(file);
  }

  std::ofstream open(const Path& file) {
    std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    return out;
  }

 private:
  const Path& root_;
  StageSummary& stage_;
};

std::vector<FlowField> compute_flows(const FrameSequence& seq, const FlowParams& params, const Path& import_dir,
                                     unsigned threads) {
  std::vector<FlowField> flows;
  if (seq.size() < 2) return flows;
  flows.reserve(seq.size() - 1);
  for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
    if (!import_dir.empty())
      flows.push_back(import_flow(import_dir / flo_name(seq[t].id()), std::pair{seq[t].width(), seq[t].height()}));
    else
      flows.push_back(estimate_flow(seq[t], seq[t + 1], params, threads));
  }
  return flows;
}

void write_sequence(const FrameSequence& seq, const Path& dir, Outputs& outputs) {
  save_frame_sequence(dir, seq);
  for (const auto& f : seq.frames()) outputs.add(dir / frame_filename(f.id()));
}

/// Hashes the input files the enabled stages read. Keys name the role, not
/// the location, so relocated inputs keep the manifest stable.
std::map<std::string, std::string> input_hashes(const PipelineConfig& cfg) {
  std::map<std::string, std::string> out;
  auto file = [&](const std::string& key, bool used, const Path& p) {
    if (used && !p.empty() && std::filesystem::is_regular_file(p)) out[key] = sha256_file(p);
  };
  auto dir = [&](const std::string& key, const Path& p) {
    if (p.empty() || !std::filesystem::is_directory(p)) return;
    for (const auto& e : std::filesystem::directory_iterator(p))
      if (e.is_regular_file()) out[key + "/" + e.path().filename().string()] = sha256_file(e.path());
  };
  file("enhance.boxes", cfg.enhance.enabled, cfg.enhance.boxes);
  file("sync.gt", cfg.sync.enabled, cfg.sync.gt);
  file("sync.pred", cfg.sync.enabled, cfg.sync.pred);
  file("calibrate.points3d", cfg.calibrate.enabled, cfg.calibrate.points3d);
  file("calibrate.annotation", cfg.calibrate.enabled, cfg.calibrate.annotation);
  file("calibrate.extrinsics", cfg.calibrate.enabled, cfg.calibrate.extrinsics);
  file("eval.pred", cfg.eval.enabled, cfg.eval.pred);
  file("eval.gt", cfg.eval.enabled, cfg.eval.gt);
  const bool reads_frames = cfg.enhance.enabled || cfg.flow.enabled || cfg.augment.enabled ||
                            (cfg.sync.enabled && cfg.sync.trim) || cfg.calibrate.enabled;
  if (reads_frames) dir("frames", cfg.frames);
  if (cfg.flow.enabled || cfg.augment.enabled) dir("flow.import", cfg.flow.import_dir);
  return out;
}

}  // namespace

std::string run_manifest_json(const RunSummary& s) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& st : s.stages)
    stages.push_back({{"name", st.name}, {"outputs", st.outputs}, {"notes", st.notes}});
  nlohmann::json j{{"config_digest", s.config_digest},
                   {"seed", s.seed},
                   {"inputs", s.inputs},
                   {"stages", std::move(stages)},
                   {"split", {{"status", s.split_status}, {"notes", s.split_notes}}},
                   {"status", s.ok ? "ok" : "failed"}};
  if (!s.ok) {
    j["failed_stage"] = s.failed_stage;
    j["error"] = s.error;
    j["partial_outputs"] = true;
  }
  return j.dump(2) + "\n";
}

RunSummary run_pipeline(const PipelineConfig& cfg, unsigned threads) {
  RunSummary summary;
  summary.config_digest = config_digest(cfg);
  summary.seed = cfg.seed;
  summary.inputs = input_hashes(cfg);
  const Path& root = cfg.output;
  std::filesystem::create_directories(root);

  if (cfg.observed_split.empty() || !cfg.split.enabled) {
    summary.split_status = "skipped";
  } else {
    const auto report = validate_split(cfg.observed_split, cfg.split);
    summary.split_status = to_string(report.overall);
    for (const auto& e : report.entries)
      if (e.status == SplitStatus::Mismatch) summary.split_notes.push_back(e.name + ": " + e.message);
  }

  std::optional<FrameSequence> frames;
  auto load_frames = [&]() -> const FrameSequence& {
    if (!frames) frames = load_frame_sequence(cfg.frames);
    return *frames;
  };
  std::optional<std::vector<FlowField>> flows;

  auto stage = [&](const std::string& name, bool enabled, const std::function<void(Outputs&, StageSummary&)>& body) {
    if (!enabled) return;
    summary.stages.push_back({name, {}, {}});
    StageSummary& st = summary.stages.back();
    Outputs outputs(root, st);
    try {
      body(outputs, st);
    } catch (const std::exception& e) {
      summary.ok = false;
      summary.failed_stage = name;
      summary.error = e.what();
      std::ofstream(root / "run_manifest.json") << run_manifest_json(summary);
      throw StageError(name, e.what());
    }
  };

  stage("enhance", cfg.enhance.enabled, [&](Outputs& out, StageSummary& st) {
    const auto& seq = load_frames();
    const auto boxes = load_boxes(cfg.enhance.boxes);
    std::vector<std::optional<Frame>> enhanced(seq.size());
    parallel_for(0, seq.size(), threads, [&](std::size_t i) {
      auto it = std::find_if(boxes.begin(), boxes.end(), [&](const BoundingBox& b) { return b.frame_id == seq[i].id(); });
      if (it != boxes.end()) enhanced[i] = enhance_frame(seq[i], *it, cfg.enhance.params);
    });
    const Path dir = root / "enhance";
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (!enhanced[i]) {
        st.notes.push_back("frame " + std::to_string(seq[i].id()) + " has no bounding box");
        continue;
      }
      write_png(dir / frame_filename(seq[i].id()), enhanced[i]->rgb());
      out.add(dir / frame_filename(seq[i].id()));
    }
  });

  stage("flow", cfg.flow.enabled, [&](Outputs& out, StageSummary&) {
    const auto& seq = load_frames();
    flows = compute_flows(seq, cfg.flow.params, cfg.flow.import_dir, threads);
    const Path dir = root / "flow";
    std::filesystem::create_directories(dir);
    for (std::size_t t = 0; t < flows->size(); ++t) {
      export_flow(dir / flo_name(seq[t].id()), (*flows)[t]);
      out.add(dir / flo_name(seq[t].id()));
    }
  });

  stage("augment", cfg.augment.enabled, [&](Outputs& out, StageSummary&) {
    const auto& seq = load_frames();
    if (!flows) flows = compute_flows(seq, cfg.flow.params, cfg.flow.import_dir, threads);
    const auto result = augment_sequence(seq, *flows, cfg.augment.blur, threads);
    write_sequence(result.frames, root / "augment" / "frames", out);
    const Path manifest = root / "augment" / "manifest.jsonl";
    {
      auto file = out.open(manifest);
      write_manifest(file, result.manifest);
    }
    out.add(manifest);
  });

  stage("sync", cfg.sync.enabled, [&](Outputs& out, StageSummary& st) {
    const auto gt = load_pose_track(cfg.sync.gt);
    const auto pred = load_pose_track(cfg.sync.pred);
    if (gt.skipped_rows + pred.skipped_rows > 0)
      st.notes.push_back(std::to_string(gt.skipped_rows + pred.skipped_rows) + " malformed keypoint rows skipped");
    const auto alignment = align_sequences(gt.track, pred.track, cfg.sync.weights);
    const Path file = root / "sync" / "alignment.csv";
    {
      auto f = out.open(file);
      write_alignment(f, alignment);
    }
    out.add(file);
    if (cfg.sync.histogram_bins > 0) {
      const auto hist = cost_histogram(alignment, static_cast<std::size_t>(cfg.sync.histogram_bins));
      const Path hfile = root / "sync" / "histogram.csv";
      {
        auto f = out.open(hfile);
        f << "bin_lo,bin_hi,count\n";
        const double width = (hist.hi - hist.lo) / static_cast<double>(hist.counts.size());
        for (std::size_t b = 0; b < hist.counts.size(); ++b)
          f << format_real(hist.lo + width * b) << ',' << format_real(hist.lo + width * (b + 1)) << ','
            << hist.counts[b] << '\n';
      }
      out.add(hfile);
    }
    if (cfg.sync.trim) write_sequence(trim_unannotated(load_frames(), alignment), root / "sync" / "frames", out);
  });

  stage("calibrate", cfg.calibrate.enabled, [&](Outputs& out, StageSummary& st) {
    const auto& c = cfg.calibrate;
    const auto points = load_pose_track(c.points3d, 3).track;
    const auto annotated = load_pose_track(c.annotation, 2).track;
    std::vector<Pose> refs3d, refs2d;
    for (const auto& p : annotated.poses())
      if (const Pose* q = points.find(p.frame_id)) {
        refs3d.push_back(*q);
        refs2d.push_back(p);
      }
    if (refs3d.empty()) throw ValidationError("annotation and 3-D points share no frame id");
    st.notes.push_back(std::to_string(refs3d.size()) + " reference frame(s)");

    Camera cam;
    cam.focal = c.initial_focal;
    if (c.principal) {
      cam.principal = {c.principal->first, c.principal->second};
    } else {
      std::pair<int, int> size = c.image_size ? *c.image_size : std::pair{load_frames()[0].width(), load_frames()[0].height()};
      cam.principal = {size.first / 2.0, size.second / 2.0};
    }
    if (!c.extrinsics.empty()) load_extrinsics(c.extrinsics, cam);
    const auto result = optimize_focal(cam, refs3d, refs2d, c.optimizer);
    const Path cam_file = root / "calibrate" / "camera.txt";
    const Path trace_file = root / "calibrate" / "trace.csv";
    {
      auto f = out.open(cam_file);
      write_camera(f, result.camera);
    }
    {
      auto f = out.open(trace_file);
      write_trace(f, result.trace);
    }
    out.add(cam_file);
    out.add(trace_file);
  });

  stage("eval", cfg.eval.enabled, [&](Outputs& out, StageSummary& st) {
    const auto pred = load_pose_track(cfg.eval.pred).track;
    const auto gt = load_pose_track(cfg.eval.gt).track;
    const auto report = mpjpe(pred, gt);
    if (!report.skipped_pred.empty() || !report.skipped_gt.empty())
      st.notes.push_back(std::to_string(report.skipped_pred.size() + report.skipped_gt.size()) +
                         " non-overlapping frame(s) skipped");
    const Path csv = root / "eval" / "report.csv";
    const Path json = root / "eval" / "report.json";
    {
      auto f = out.open(csv);
      write_report_csv(f, report);
    }
    {
      auto f = out.open(json);
      f << report_json(report) << '\n';
    }
    out.add(csv);
    out.add(json);
  });

  std::ofstream(root / "run_manifest.json") << run_manifest_json(summary);
  return summary;
}

ShardSummary ingest_itw(const Path& frames_dir, const Path& pseudo_gt, const BlurConfig& blur,
                        const FlowParams& flow, const Path& out_dir, unsigned threads) {
  validate(blur);
  const FrameSequence all = load_frame_sequence(frames_dir, "in-the-wild");
  const PoseTrack poses = load_pose_track(pseudo_gt).track;

  ShardSummary summary;
  summary.input_frames = all.size();
  std::vector<Frame> kept;
  for (const auto& f : all.frames()) {
    if (poses.find(f.id()))
      kept.push_back(f);
    else
      summary.excluded.push_back(f.id());
  }
  for (const auto& p : poses.poses())
    if (std::none_of(all.frames().begin(), all.frames().end(), [&](const Frame& f) { return f.id() == p.frame_id; }))
      summary.unmatched_poses.push_back(p.frame_id);
  if (kept.empty()) throw ValidationError("no frame has pseudo ground truth");

  const FrameSequence seq(std::move(kept), "in-the-wild");
  const auto flows = compute_flows(seq, flow, {}, threads);
  const auto result = augment_sequence(seq, flows, blur, threads);
  summary.output_frames = result.frames.size();

  std::filesystem::create_directories(out_dir);
  StageSummary st;
  Outputs outputs(out_dir, st);
  write_sequence(result.frames, out_dir / "frames", outputs);

  const Path keypoints = out_dir / "keypoints.csv";
  save_pose_track(keypoints, poses.filter([&](std::int64_t id) {
    return std::any_of(seq.frames().begin(), seq.frames().end(), [&](const Frame& f) { return f.id() == id; });
  }));
  outputs.add(keypoints);

  const Path manifest = out_dir / "manifest.jsonl";
  {
    auto f = outputs.open(manifest);
    write_manifest(f, result.manifest);
  }
  outputs.add(manifest);

  const Path exclusions = out_dir / "exclusions.txt";
  {
    auto f = outputs.open(exclusions);
    for (auto id : summary.excluded) f << "frame " << id << ": no pseudo ground truth\n";
    for (auto id : summary.unmatched_poses) f << "pose " << id << ": no matching frame\n";
  }
  outputs.add(exclusions);
  summary.outputs = st.outputs;
  return summary;
}

}  // namespace pitchblur
