#include "pitchblur/pipeline/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "pitchblur/core/hash.hpp"

namespace pitchblur {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

template <typename T>
bool parse_num(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

/// Collects errors while walking one YAML mapping.
class Reader {
 public:
  Reader(const YAML::Node& node, std::string prefix, std::vector<std::string>& errors, const Path& base)
      : node_(node), prefix_(std::move(prefix)), errors_(errors), base_(base) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) error("", "expected a mapping");
  }

  ~Reader() {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) error(key, "unknown key");
    }
  }

  YAML::Node child(const std::string& key) {
    seen_.insert(key);
    if (!node_ || !node_.IsMap()) return YAML::Node();
    return node_[key];
  }

  std::string path_of(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void error(const std::string& key, const std::string& message) {
    errors_.push_back((key.empty() ? prefix_ : path_of(key)) + ": " + message);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    auto n = child(key);
    if (!n || n.IsNull()) return;
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      error(key, "has the wrong type");
    }
  }

  void get_path(const std::string& key, Path& out) {
    std::string text;
    get(key, text);
    if (!text.empty()) out = base_.empty() ? Path(text) : base_ / text;
  }

  template <typename T, typename Parse>
  void get_range(const std::string& key, std::pair<T, T>& out, Parse parse) {
    auto n = child(key);
    if (!n || n.IsNull()) return;
    try {
      if (n.IsSequence() && n.size() == 2)
        out = {n[0].as<T>(), n[1].as<T>()};
      else
        out = parse(n.as<std::string>());
    } catch (const std::exception&) {
      error(key, "expected 'min:max' or a two-element list");
    }
  }

 private:
  YAML::Node node_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  const Path& base_;
  std::set<std::string> seen_;
};

void read_split(Reader& top, PipelineConfig& cfg, std::vector<std::string>& errors, const Path& base) {
  Reader split(top.child("split"), "split", errors, base);
  split.get("check", cfg.split.enabled);

  auto read_counts = [&](const YAML::Node& node, const std::string& prefix, std::vector<SplitCounts>& out) {
    if (!node || node.IsNull()) return;
    if (!node.IsMap()) {
      errors.push_back(prefix + ": expected a mapping of split name to counts");
      return;
    }
    out.clear();
    for (const auto& kv : node) {
      SplitCounts c;
      c.name = kv.first.as<std::string>();
      Reader entry(kv.second, prefix + "." + c.name, errors, base);
      entry.get("sequences", c.sequences);
      std::int64_t frames = -1;
      entry.get("frames", frames);
      if (frames >= 0) c.frames = frames;
      out.push_back(std::move(c));
    }
  };
  read_counts(split.child("expected"), "split.expected", cfg.split.splits);
  read_counts(split.child("observed"), "split.observed", cfg.observed_split);
}

void require_file(const Path& p, const std::string& what, std::vector<std::string>& errors) {
  if (p.empty())
    errors.push_back(what + ": required when the stage is enabled");
  else if (!std::filesystem::exists(p))
    errors.push_back(what + ": path does not exist: " + p.string());
}

}  // namespace

std::pair<double, double> parse_real_range(std::string_view text) {
  const auto colon = text.find(':');
  std::pair<double, double> r;
  if (colon == std::string_view::npos || !parse_num(text.substr(0, colon), r.first) ||
      !parse_num(text.substr(colon + 1), r.second))
    throw ValidationError("expected 'min:max', got '" + std::string(text) + "'");
  return r;
}

std::pair<int, int> parse_int_range(std::string_view text) {
  const auto colon = text.find(':');
  std::pair<int, int> r;
  if (colon == std::string_view::npos || !parse_num(text.substr(0, colon), r.first) ||
      !parse_num(text.substr(colon + 1), r.second))
    throw ValidationError("expected integer 'min:max', got '" + std::string(text) + "'");
  return r;
}

std::pair<int, int> parse_tiles(std::string_view text) {
  const auto x = text.find('x');
  std::pair<int, int> r;
  if (x == std::string_view::npos || !parse_num(text.substr(0, x), r.first) || !parse_num(text.substr(x + 1), r.second))
    throw ValidationError("expected tiles as 'RxC', got '" + std::string(text) + "'");
  return r;
}

ConfigResult parse_config(std::string_view text, const Path& base_dir) {
  ConfigResult result;
  auto& errors = result.errors;
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    errors.push_back(std::string("config is not valid YAML: ") + e.what());
    return result;
  }

  PipelineConfig cfg;
  {
    Reader top(root, "", errors, base_dir);
    top.get("seed", cfg.seed);
    top.get_path("output", cfg.output);
    top.get_path("frames", cfg.frames);
    read_split(top, cfg, errors, base_dir);

    {
      Reader r(top.child("enhance"), "enhance", errors, base_dir);
      r.get("enabled", cfg.enhance.enabled);
      r.get_path("boxes", cfg.enhance.boxes);
      r.get("margin", cfg.enhance.params.margin);
      r.get("clip_limit", cfg.enhance.params.clip_limit);
      std::string tiles;
      r.get("tiles", tiles);
      if (!tiles.empty()) {
        try {
          std::tie(cfg.enhance.params.tile_rows, cfg.enhance.params.tile_cols) = parse_tiles(tiles);
        } catch (const ValidationError& e) {
          r.error("tiles", e.what());
        }
      }
    }
    {
      Reader r(top.child("flow"), "flow", errors, base_dir);
      r.get("enabled", cfg.flow.enabled);
      r.get_path("import_dir", cfg.flow.import_dir);
      r.get("pyramid_levels", cfg.flow.params.pyramid_levels);
      r.get("block_radius", cfg.flow.params.block_radius);
      r.get("search_radius", cfg.flow.params.search_radius);
      r.get("smoothing_passes", cfg.flow.params.smoothing_passes);
    }
    {
      Reader r(top.child("augment"), "augment", errors, base_dir);
      BlurConfig& b = cfg.augment.blur;
      r.get("enabled", cfg.augment.enabled);
      std::string text_value;
      r.get("patch_mode", text_value);
      if (!text_value.empty()) {
        try {
          b.patch_mode = parse_patch_mode(text_value);
        } catch (const ValidationError& e) {
          r.error("patch_mode", e.what());
        }
      }
      r.get("patches", b.n_patches);
      r.get("filters", b.n_filters);
      text_value.clear();
      r.get("effect", text_value);
      if (!text_value.empty()) {
        try {
          b.effect = parse_effect(text_value);
        } catch (const ValidationError& e) {
          r.error("effect", e.what());
        }
      }
      r.get_range("kernel_size", b.kernel_size_range, parse_int_range);
      if (auto n = r.child("angle"); n && !n.IsNull()) {
        std::pair<double, double> degrees;
        r.get_range("angle", degrees, parse_real_range);
        b.angle_range = {degrees.first * kDegToRad, degrees.second * kDegToRad};
      }
      r.get_range("scale", b.scale_range, parse_real_range);
      r.get("gaussian_sigma", b.gaussian_sigma);
      text_value.clear();
      r.get("magnitude", text_value);
      if (text_value == "vector_sum")
        b.magnitude = MagnitudeMode::VectorSum;
      else if (!text_value.empty() && text_value != "magnitude_sum")
        r.error("magnitude", "expected magnitude_sum or vector_sum");
      bool printed = false;
      r.get("paper_matrix", printed);
      b.kernel_matrix = printed ? KernelMatrix::Printed : KernelMatrix::Centered;
    }
    {
      Reader r(top.child("sync"), "sync", errors, base_dir);
      r.get("enabled", cfg.sync.enabled);
      r.get_path("gt", cfg.sync.gt);
      r.get_path("pred", cfg.sync.pred);
      r.get("spatial_gain", cfg.sync.weights.spatial);
      r.get("temporal_gain", cfg.sync.weights.temporal);
      r.get("histogram_bins", cfg.sync.histogram_bins);
      r.get("trim", cfg.sync.trim);
    }
    {
      Reader r(top.child("calibrate"), "calibrate", errors, base_dir);
      CalibrateStage& c = cfg.calibrate;
      r.get("enabled", c.enabled);
      r.get_path("points3d", c.points3d);
      r.get_path("annotation", c.annotation);
      r.get_path("extrinsics", c.extrinsics);
      r.get("initial_focal", c.initial_focal);
      std::pair<double, double> principal{-1, -1};
      r.get_range("principal", principal, parse_real_range);
      if (principal.first >= 0) c.principal = principal;
      std::pair<int, int> size{0, 0};
      r.get_range("image_size", size, parse_int_range);
      if (size.first > 0) c.image_size = size;
      r.get("learning_rate", c.optimizer.learning_rate);
      r.get("max_iters", c.optimizer.max_iters);
      r.get("tolerance", c.optimizer.tolerance);
      std::string mode;
      r.get("gradient", mode);
      if (mode == "finite_difference")
        c.optimizer.gradient = GradientMode::FiniteDifference;
      else if (!mode.empty() && mode != "analytic")
        r.error("gradient", "expected analytic or finite_difference");
      r.get("backtracking", c.optimizer.backtracking);
      r.get("refine_translation", c.optimizer.refine_translation);
    }
    {
      Reader r(top.child("eval"), "eval", errors, base_dir);
      r.get("enabled", cfg.eval.enabled);
      r.get_path("pred", cfg.eval.pred);
      r.get_path("gt", cfg.eval.gt);
    }
  }
  cfg.augment.blur.seed = cfg.seed;

  // Module invariants for every block, so one pass reports everything.
  for (const auto& e : check(cfg.augment.blur)) errors.push_back("augment: " + e);
  auto collect = [&](const std::string& stage, auto&& fn) {
    try {
      fn();
    } catch (const ValidationError& e) {
      errors.push_back(stage + ": " + e.what());
    }
  };
  collect("flow", [&] { validate(cfg.flow.params); });
  collect("enhance", [&] { validate(cfg.enhance.params); });
  collect("sync", [&] { validate(cfg.sync.weights); });
  collect("calibrate", [&] { validate(cfg.calibrate.optimizer); });
  if (!(cfg.calibrate.initial_focal > 0)) errors.push_back("calibrate.initial_focal: must be positive");
  if (cfg.sync.histogram_bins < 0) errors.push_back("sync.histogram_bins: must be >= 0");

  if (cfg.enhance.enabled) {
    require_file(cfg.frames, "frames", errors);
    require_file(cfg.enhance.boxes, "enhance.boxes", errors);
  }
  if (cfg.flow.enabled || cfg.augment.enabled) require_file(cfg.frames, "frames", errors);
  if (!cfg.flow.import_dir.empty() && !std::filesystem::is_directory(cfg.flow.import_dir))
    errors.push_back("flow.import_dir: not a directory: " + cfg.flow.import_dir.string());
  if (cfg.sync.enabled) {
    require_file(cfg.sync.gt, "sync.gt", errors);
    require_file(cfg.sync.pred, "sync.pred", errors);
    if (cfg.sync.trim) require_file(cfg.frames, "frames", errors);
  }
  if (cfg.calibrate.enabled) {
    require_file(cfg.calibrate.points3d, "calibrate.points3d", errors);
    require_file(cfg.calibrate.annotation, "calibrate.annotation", errors);
    if (!cfg.calibrate.extrinsics.empty()) require_file(cfg.calibrate.extrinsics, "calibrate.extrinsics", errors);
    if (!cfg.calibrate.principal && !cfg.calibrate.image_size && cfg.frames.empty())
      errors.push_back("calibrate: needs principal, image_size or frames to place the principal point");
  }
  if (cfg.eval.enabled) {
    require_file(cfg.eval.pred, "eval.pred", errors);
    require_file(cfg.eval.gt, "eval.gt", errors);
  }

  // `frames` may be demanded by several stages.
  std::sort(errors.begin(), errors.end());
  errors.erase(std::unique(errors.begin(), errors.end()), errors.end());
  if (errors.empty()) result.config = std::move(cfg);
  return result;
}

ConfigResult validate_config(const Path& path) {
  std::ifstream in(path);
  if (!in) return {std::nullopt, {"cannot open config file " + path.string()}};
  std::stringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

std::string canonical_json(const PipelineConfig& cfg) {
  using nlohmann::json;
  json splits = json::array();
  for (const auto& s : cfg.split.splits)
    splits.push_back({{"name", s.name}, {"sequences", s.sequences}, {"frames", s.frames ? json(*s.frames) : json()}});
  json observed = json::array();
  for (const auto& s : cfg.observed_split)
    observed.push_back({{"name", s.name}, {"sequences", s.sequences}, {"frames", s.frames ? json(*s.frames) : json()}});

  const auto& c = cfg.calibrate;
  json j{
      {"seed", cfg.seed},
      {"frames", cfg.frames.generic_string()},
      {"split", {{"check", cfg.split.enabled}, {"expected", splits}, {"observed", observed}}},
      {"enhance",
       {{"enabled", cfg.enhance.enabled},
        {"boxes", cfg.enhance.boxes.generic_string()},
        {"margin", cfg.enhance.params.margin},
        {"clip_limit", cfg.enhance.params.clip_limit},
        {"tiles", {cfg.enhance.params.tile_rows, cfg.enhance.params.tile_cols}}}},
      {"flow",
       {{"enabled", cfg.flow.enabled},
        {"import_dir", cfg.flow.import_dir.generic_string()},
        {"pyramid_levels", cfg.flow.params.pyramid_levels},
        {"block_radius", cfg.flow.params.block_radius},
        {"search_radius", cfg.flow.params.search_radius},
        {"smoothing_passes", cfg.flow.params.smoothing_passes}}},
      {"augment", {{"enabled", cfg.augment.enabled}, {"blur", json::parse(canonical_json(cfg.augment.blur))}}},
      {"sync",
       {{"enabled", cfg.sync.enabled},
        {"gt", cfg.sync.gt.generic_string()},
        {"pred", cfg.sync.pred.generic_string()},
        {"spatial_gain", cfg.sync.weights.spatial},
        {"temporal_gain", cfg.sync.weights.temporal},
        {"histogram_bins", cfg.sync.histogram_bins},
        {"trim", cfg.sync.trim}}},
      {"calibrate",
       {{"enabled", c.enabled},
        {"points3d", c.points3d.generic_string()},
        {"annotation", c.annotation.generic_string()},
        {"extrinsics", c.extrinsics.generic_string()},
        {"initial_focal", c.initial_focal},
        {"principal", c.principal ? json{c.principal->first, c.principal->second} : json()},
        {"image_size", c.image_size ? json{c.image_size->first, c.image_size->second} : json()},
        {"learning_rate", c.optimizer.learning_rate},
        {"max_iters", c.optimizer.max_iters},
        {"tolerance", c.optimizer.tolerance},
        {"gradient", c.optimizer.gradient == GradientMode::Analytic ? "analytic" : "finite_difference"},
        {"backtracking", c.optimizer.backtracking},
        {"refine_translation", c.optimizer.refine_translation}}},
      {"eval", {{"enabled", cfg.eval.enabled}, {"pred", cfg.eval.pred.generic_string()}, {"gt", cfg.eval.gt.generic_string()}}},
  };
  return j.dump();
}

std::string config_digest(const PipelineConfig& cfg) { return sha256_hex(canonical_json(cfg)); }

}  // namespace pitchblur
