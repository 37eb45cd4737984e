// Command-line front end. Exit codes: 0 success, 1 validation failure,
// 2 runtime failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pitchblur/pitchblur.hpp"

namespace pb = pitchblur;

namespace {

struct BlurFlags {
  std::string patch_mode;
  std::optional<int> patches;
  std::optional<int> filters;
  std::string effect;
  std::string kernel_size;
  std::string angle;
  std::string scale;
  std::optional<double> sigma;
  std::string magnitude;
  std::optional<std::uint64_t> seed;
  bool paper_matrix = false;

  void add_to(CLI::App& app) {
    app.add_option("--patch-mode", patch_mode, "grid:RxC or fixed:S (default fixed:30)");
    app.add_option("--patches", patches, "patches blurred per frame (default 3)");
    app.add_option("--filters", filters, "kernels drawn per frame, 0 for one per patch (default 2)");
    app.add_option("--effect", effect, "motion_blur, gaussian_blur, binary_mask or none");
    app.add_option("--kernel-size", kernel_size, "odd kernel size range lo:hi (default 5:15)");
    app.add_option("--angle", angle, "kernel angle range in degrees lo:hi (default 0:360)");
    app.add_option("--scale", scale, "kernel scale range lo:hi (default 0.8:1.2)");
    app.add_option("--sigma", sigma, "gaussian_blur standard deviation (default 2)");
    app.add_option("--magnitude", magnitude, "magnitude_sum or vector_sum");
    app.add_option("--seed", seed, "random seed (default 0)");
    app.add_flag("--paper-matrix", paper_matrix, "orient kernels with the printed affine matrix verbatim");
  }

  pb::BlurConfig apply(pb::BlurConfig cfg) const {
    if (!patch_mode.empty()) cfg.patch_mode = pb::parse_patch_mode(patch_mode);
    if (patches) cfg.n_patches = *patches;
    if (filters) cfg.n_filters = *filters;
    if (!effect.empty()) cfg.effect = pb::parse_effect(effect);
    if (!kernel_size.empty()) cfg.kernel_size_range = pb::parse_int_range(kernel_size);
    if (!angle.empty()) {
      const auto deg = pb::parse_real_range(angle);
      cfg.angle_range = {deg.first * std::numbers::pi / 180.0, deg.second * std::numbers::pi / 180.0};
    }
    if (!scale.empty()) cfg.scale_range = pb::parse_real_range(scale);
    if (sigma) cfg.gaussian_sigma = *sigma;
    if (magnitude == "magnitude_sum")
      cfg.magnitude = pb::MagnitudeMode::MagnitudeSum;
    else if (magnitude == "vector_sum")
      cfg.magnitude = pb::MagnitudeMode::VectorSum;
    else if (!magnitude.empty())
      throw pb::ValidationError("unknown magnitude mode '" + magnitude + "'");
    if (seed) cfg.seed = *seed;
    if (paper_matrix) cfg.kernel_matrix = pb::KernelMatrix::Printed;
    pb::validate(cfg);
    return cfg;
  }
};

struct FlowFlags {
  pb::FlowParams params;

  void add_to(CLI::App& app) {
    app.add_option("--pyramid-levels", params.pyramid_levels, "pyramid levels")->capture_default_str();
    app.add_option("--block-radius", params.block_radius, "SAD window radius")->capture_default_str();
    app.add_option("--search-radius", params.search_radius, "per-level search radius")->capture_default_str();
    app.add_option("--smoothing", params.smoothing_passes, "3x3 box smoothing passes")->capture_default_str();
  }
};

std::ofstream open_out(const pb::Path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pb::Error("cannot write " + path.string());
  return out;
}

std::string flo_name(std::int64_t id) {
  auto name = pb::frame_filename(id);
  return name.substr(0, name.size() - 4) + ".flo";
}

std::vector<pb::FlowField> sequence_flows(const pb::FrameSequence& seq, const pb::FlowParams& params,
                                          const pb::Path& flow_dir, unsigned threads) {
  std::vector<pb::FlowField> flows;
  for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
    if (flow_dir.empty())
      flows.push_back(pb::estimate_flow(seq[t], seq[t + 1], params, threads));
    else
      flows.push_back(pb::import_flow(flow_dir / flo_name(seq[t].id()), std::pair{seq[t].width(), seq[t].height()}));
  }
  return flows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective motion-blur augmentation and pose-evaluation toolkit"};
  app.require_subcommand(1);
  unsigned threads = pb::default_parallelism();
  app.add_option("--threads", threads, "worker count (default: PITCHBLUR_THREADS or hardware)")
      ->check(CLI::PositiveNumber);

  // flow
  auto* flow_cmd = app.add_subcommand("flow", "estimate forward optical flow between consecutive frames");
  pb::Path flow_frames, flow_out;
  FlowFlags flow_flags;
  flow_cmd->add_option("--frames", flow_frames, "directory of <id>.png frames")->required();
  flow_cmd->add_option("--out", flow_out, "output directory for <id>.flo files")->required();
  flow_flags.add_to(*flow_cmd);

  // augment
  auto* aug_cmd = app.add_subcommand("augment", "blur the fastest-moving patches of every frame");
  pb::Path aug_frames, aug_out, aug_flow_dir;
  BlurFlags aug_blur;
  FlowFlags aug_flow;
  aug_cmd->add_option("--frames", aug_frames, "directory of <id>.png frames")->required();
  aug_cmd->add_option("--out", aug_out, "output directory (frames/ and manifest.jsonl)")->required();
  aug_cmd->add_option("--flow-dir", aug_flow_dir, "use <id>.flo files instead of estimating flow");
  aug_blur.add_to(*aug_cmd);
  aug_flow.add_to(*aug_cmd);

  // sync
  auto* sync_cmd = app.add_subcommand("sync", "align estimated poses with sparse ground truth");
  pb::Path sync_gt, sync_pred, sync_out, sync_frames, sync_trim_out;
  pb::SyncWeights sync_w;
  sync_cmd->add_option("--gt", sync_gt, "ground-truth keypoint file")->required();
  sync_cmd->add_option("--pred", sync_pred, "estimated keypoint file")->required();
  sync_cmd->add_option("--out", sync_out, "alignment file")->required();
  sync_cmd->add_option("--spatial-gain", sync_w.spatial, "gain on the squared-distance term")->capture_default_str();
  sync_cmd->add_option("--temporal-gain", sync_w.temporal, "gain on the cosine term")->capture_default_str();
  auto* trim_frames_opt = sync_cmd->add_option("--frames", sync_frames, "frames to trim to the aligned subset");
  sync_cmd->add_option("--trim-out", sync_trim_out, "output directory for trimmed frames")->needs(trim_frames_opt);

  // calibrate
  auto* cal_cmd = app.add_subcommand("calibrate", "recover the focal length from 3-D points and a 2-D annotation");
  pb::Path cal_points, cal_ann, cal_ext, cal_camera_out, cal_trace_out;
  double cal_focal = 1000.0;
  std::vector<double> cal_principal;
  pb::OptimizerConfig cal_opt;
  std::string cal_gradient = "analytic";
  bool cal_no_backtracking = false;
  cal_cmd->add_option("--points3d", cal_points, "3-D keypoint file")->required();
  cal_cmd->add_option("--annotation", cal_ann, "2-D keypoint file")->required();
  cal_cmd->add_option("--extrinsics", cal_ext, "12 reals: row-major R then t");
  cal_cmd->add_option("--camera-out", cal_camera_out, "camera file")->required();
  cal_cmd->add_option("--trace-out", cal_trace_out, "convergence trace CSV")->required();
  cal_cmd->add_option("--initial-focal", cal_focal, "starting focal length in pixels")->capture_default_str();
  cal_cmd->add_option("--principal", cal_principal, "principal point cx cy")->expected(2)->required();
  cal_cmd->add_option("--learning-rate", cal_opt.learning_rate, "initial step size")->capture_default_str();
  cal_cmd->add_option("--max-iters", cal_opt.max_iters, "iteration cap")->capture_default_str();
  cal_cmd->add_option("--tolerance", cal_opt.tolerance, "loss-change stopping threshold")->capture_default_str();
  cal_cmd->add_option("--gradient", cal_gradient, "analytic or finite_difference")->capture_default_str();
  cal_cmd->add_flag("--no-backtracking", cal_no_backtracking, "use the fixed learning rate");
  cal_cmd->add_flag("--refine-translation", cal_opt.refine_translation, "also refine the extrinsic translation");

  // enhance
  auto* enh_cmd = app.add_subcommand("enhance", "crop frames to bounding boxes and equalize luminosity");
  pb::Path enh_frames, enh_boxes, enh_out;
  pb::EnhanceConfig enh_cfg;
  std::string enh_tiles;
  enh_cmd->add_option("--frames", enh_frames, "directory of <id>.png frames")->required();
  enh_cmd->add_option("--boxes", enh_boxes, "bounding-box CSV frame_id,x,y,w,h")->required();
  enh_cmd->add_option("--out", enh_out, "output directory")->required();
  enh_cmd->add_option("--margin", enh_cfg.margin, "fractional padding around each box")->capture_default_str();
  enh_cmd->add_option("--clip-limit", enh_cfg.clip_limit, "histogram clip limit")->capture_default_str();
  enh_cmd->add_option("--tiles", enh_tiles, "tile grid RxC (default 8x8)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "mean per-joint position error of a prediction");
  pb::Path eval_pred, eval_gt, eval_csv, eval_json;
  eval_cmd->add_option("--pred", eval_pred, "predicted keypoint file")->required();
  eval_cmd->add_option("--gt", eval_gt, "ground-truth keypoint file")->required();
  eval_cmd->add_option("--csv", eval_csv, "per-frame report CSV")->required();
  eval_cmd->add_option("--json", eval_json, "report JSON");

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "run the stages enabled in a configuration file");
  pb::Path pipe_config, pipe_output;
  std::optional<std::uint64_t> pipe_seed;
  pipe_cmd->add_option("config", pipe_config, "YAML configuration")->required();
  pipe_cmd->add_option("--output", pipe_output, "override the output directory");
  pipe_cmd->add_option("--seed", pipe_seed, "override the seed");

  // ingest-itw
  auto* itw_cmd = app.add_subcommand("ingest-itw", "build an augmented shard from in-the-wild frames");
  pb::Path itw_frames, itw_gt, itw_out;
  BlurFlags itw_blur;
  FlowFlags itw_flow;
  itw_cmd->add_option("--frames", itw_frames, "directory of <id>.png frames")->required();
  itw_cmd->add_option("--pseudo-gt", itw_gt, "pseudo ground-truth keypoint file")->required();
  itw_cmd->add_option("--out", itw_out, "shard directory")->required();
  itw_blur.add_to(*itw_cmd);
  itw_flow.add_to(*itw_cmd);

  // validate
  auto* val_cmd = app.add_subcommand("validate", "check a configuration file and print the resolved settings");
  pb::Path val_config;
  val_cmd->add_option("config", val_config, "YAML configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*flow_cmd) {
      pb::validate(flow_flags.params);
      const auto seq = pb::load_frame_sequence(flow_frames);
      const auto flows = sequence_flows(seq, flow_flags.params, {}, threads);
      std::filesystem::create_directories(flow_out);
      for (std::size_t t = 0; t < flows.size(); ++t) pb::export_flow(flow_out / flo_name(seq[t].id()), flows[t]);
      std::cout << flows.size() << " flow field(s) written to " << flow_out.string() << '\n';
    } else if (*aug_cmd) {
      const auto cfg = aug_blur.apply({});
      pb::validate(aug_flow.params);
      const auto seq = pb::load_frame_sequence(aug_frames);
      const auto flows = sequence_flows(seq, aug_flow.params, aug_flow_dir, threads);
      const auto result = pb::augment_sequence(seq, flows, cfg, threads);
      pb::save_frame_sequence(aug_out / "frames", result.frames);
      auto manifest = open_out(aug_out / "manifest.jsonl");
      pb::write_manifest(manifest, result.manifest);
      std::cout << result.frames.size() << " frame(s), " << result.manifest.size() << " augmentation record(s)\n";
    } else if (*sync_cmd) {
      pb::validate(sync_w);
      const auto gt = pb::load_pose_track(sync_gt);
      const auto pred = pb::load_pose_track(sync_pred);
      const auto alignment = pb::align_sequences(gt.track, pred.track, sync_w);
      auto out = open_out(sync_out);
      pb::write_alignment(out, alignment);
      if (!sync_trim_out.empty())
        pb::save_frame_sequence(sync_trim_out, pb::trim_unannotated(pb::load_frame_sequence(sync_frames), alignment));
      const auto skipped = gt.skipped_rows + pred.skipped_rows;
      if (skipped > 0) std::cerr << skipped << " malformed keypoint row(s) skipped\n";
      std::cout << alignment.pairs.size() << " pair(s), total cost " << pb::format_real(alignment.total_cost) << '\n';
    } else if (*cal_cmd) {
      if (cal_gradient == "analytic")
        cal_opt.gradient = pb::GradientMode::Analytic;
      else if (cal_gradient == "finite_difference")
        cal_opt.gradient = pb::GradientMode::FiniteDifference;
      else
        throw pb::ValidationError("unknown gradient mode '" + cal_gradient + "'");
      cal_opt.backtracking = !cal_no_backtracking;
      pb::validate(cal_opt);
      const auto points = pb::load_pose_track(cal_points, 3).track;
      const auto ann = pb::load_pose_track(cal_ann, 2).track;
      std::vector<pb::Pose> refs3d, refs2d;
      for (const auto& p : ann.poses())
        if (const pb::Pose* q = points.find(p.frame_id)) {
          refs3d.push_back(*q);
          refs2d.push_back(p);
        }
      if (refs3d.empty()) throw pb::ValidationError("annotation and 3-D points share no frame id");
      pb::Camera cam;
      cam.focal = cal_focal;
      cam.principal = {cal_principal[0], cal_principal[1]};
      if (!cal_ext.empty()) pb::load_extrinsics(cal_ext, cam);
      const auto result = pb::optimize_focal(cam, refs3d, refs2d, cal_opt);
      {
        auto out = open_out(cal_camera_out);
        pb::write_camera(out, result.camera);
      }
      auto trace = open_out(cal_trace_out);
      pb::write_trace(trace, result.trace);
      std::cout << "f = " << pb::format_real(result.camera.focal) << " after " << result.trace.size() - 1
                << " iteration(s)" << (result.converged ? "" : " (not converged)") << '\n';
    } else if (*enh_cmd) {
      if (!enh_tiles.empty()) std::tie(enh_cfg.tile_rows, enh_cfg.tile_cols) = pb::parse_tiles(enh_tiles);
      pb::validate(enh_cfg);
      const auto seq = pb::load_frame_sequence(enh_frames);
      const auto boxes = pb::load_boxes(enh_boxes);
      std::filesystem::create_directories(enh_out);
      std::size_t written = 0;
      for (const auto& box : boxes) {
        const auto it = std::find_if(seq.frames().begin(), seq.frames().end(),
                                     [&](const pb::Frame& f) { return f.id() == box.frame_id; });
        if (it == seq.frames().end()) {
          std::cerr << "box for frame " << box.frame_id << " has no frame\n";
          continue;
        }
        pb::write_png(enh_out / pb::frame_filename(it->id()), pb::enhance_frame(*it, box, enh_cfg).rgb());
        ++written;
      }
      std::cout << written << " frame(s) enhanced\n";
    } else if (*eval_cmd) {
      const auto report = pb::mpjpe(pb::load_pose_track(eval_pred).track, pb::load_pose_track(eval_gt).track);
      {
        auto out = open_out(eval_csv);
        pb::write_report_csv(out, report);
      }
      if (!eval_json.empty()) open_out(eval_json) << pb::report_json(report) << '\n';
      std::cout << "MPJPE " << pb::format_real(report.aggregate) << " over " << report.frames << " frame(s)\n";
    } else if (*pipe_cmd || *val_cmd) {
      const auto result = pb::validate_config(*pipe_cmd ? pipe_config : val_config);
      if (!result.ok()) {
        for (const auto& e : result.errors) std::cerr << "error: " << e << '\n';
        return 1;
      }
      auto cfg = *result.config;
      if (*val_cmd) {
        std::cout << pb::canonical_json(cfg) << '\n';
        return 0;
      }
      if (!pipe_output.empty()) cfg.output = pipe_output;
      if (pipe_seed) {
        cfg.seed = *pipe_seed;
        cfg.augment.blur.seed = *pipe_seed;
      }
      const auto summary = pb::run_pipeline(cfg, threads);
      for (const auto& st : summary.stages)
        std::cout << st.name << ": " << st.outputs.size() << " output(s)\n";
      if (summary.split_status == "mismatch")
        for (const auto& n : summary.split_notes) std::cerr << "split: " << n << '\n';
    } else if (*itw_cmd) {
      const auto cfg = itw_blur.apply({});
      pb::validate(itw_flow.params);
      const auto shard = pb::ingest_itw(itw_frames, itw_gt, cfg, itw_flow.params, itw_out, threads);
      for (auto id : shard.excluded) std::cerr << "excluded frame " << id << ": no pseudo ground truth\n";
      std::cout << shard.output_frames << " of " << shard.input_frames << " frame(s) in shard\n";
    }
  } catch (const pb::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const pb::StageError& e) {
    std::cerr << "stage failed: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
