#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "pitchblur/blur/augment.hpp"
#include "pitchblur/core/error.hpp"

namespace pitchblur {

void write_manifest(std::ostream& out, const AugmentationManifest& manifest) {
  for (const auto& record : manifest) {
    nlohmann::json regions = nlohmann::json::array();
    for (const auto& r : record.regions) {
      nlohmann::json j{{"index", r.region.index}, {"x", r.region.x},       {"y", r.region.y},
                       {"w", r.region.w},         {"h", r.region.h},       {"magnitude", r.magnitude},
                       {"effect", to_string(r.effect)}};
      if (r.effect == EffectKind::MotionBlur) {
        j["kernel_size"] = r.kernel_size;
        j["angle"] = r.angle;
        j["scale"] = r.scale;
      } else if (r.effect == EffectKind::GaussianBlur) {
        j["sigma"] = r.sigma;
      }
      regions.push_back(std::move(j));
    }
    nlohmann::json line{{"frame_id", record.frame_id},
                        {"seed", record.seed},
                        {"frame_seed", record.frame_seed},
                        {"config_digest", record.config_digest},
                        {"regions", std::move(regions)}};
    out << line.dump() << '\n';
  }
}

AugmentationManifest read_manifest(std::istream& in) {
  AugmentationManifest manifest;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      FrameRecord record;
      record.frame_id = j.at("frame_id").get<std::int64_t>();
      record.seed = j.at("seed").get<std::uint64_t>();
      record.frame_seed = j.at("frame_seed").get<std::uint64_t>();
      record.config_digest = j.at("config_digest").get<std::string>();
      for (const auto& jr : j.at("regions")) {
        RegionRecord r;
        r.region = {jr.at("index").get<int>(), jr.at("x").get<int>(), jr.at("y").get<int>(), jr.at("w").get<int>(),
                    jr.at("h").get<int>()};
        r.magnitude = jr.at("magnitude").get<double>();
        r.effect = parse_effect(jr.at("effect").get<std::string>());
        if (r.effect == EffectKind::MotionBlur) {
          r.kernel_size = jr.at("kernel_size").get<int>();
          r.angle = jr.at("angle").get<double>();
          r.scale = jr.at("scale").get<double>();
        } else if (r.effect == EffectKind::GaussianBlur) {
          r.sigma = jr.at("sigma").get<double>();
        }
        record.regions.push_back(r);
      }
      manifest.push_back(std::move(record));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return manifest;
}

}  // namespace pitchblur
