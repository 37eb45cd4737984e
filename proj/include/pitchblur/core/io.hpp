#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pitchblur/core/image.hpp"
#include "pitchblur/core/pose.hpp"

namespace pitchblur {

struct PoseTrackLoad {
  PoseTrack track;
  std::size_t skipped_rows = 0;  ///< rows with unparseable fields
};

/// Reads a keypoint file:
///
///   #J=<joints>,gamma=<2|3>,<name_0>,...,<name_{J-1}>
///   <frame_id>,<x_0>,<y_0>[,<z_0>],...
///
/// Blank lines are ignored. Rows containing a token that is not a number are
/// skipped and counted. A row with the wrong field count, a non-finite
/// coordinate or a non-increasing frame id is an error. When `dims` is given
/// it must match the header.
PoseTrackLoad load_pose_track(const std::filesystem::path& path, std::optional<int> dims = {});
PoseTrackLoad read_pose_track(std::istream& in, std::optional<int> dims = {});

/// Canonical writer: shortest round-trip decimal for every coordinate.
void save_pose_track(const std::filesystem::path& path, const PoseTrack& track);
void write_pose_track(std::ostream& out, const PoseTrack& track);

/// CSV `frame_id,x,y,w,h`; an optional non-numeric header row is skipped.
std::vector<BoundingBox> load_boxes(const std::filesystem::path& path);

RgbImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RgbImage& image);

/// Loads every `<number>.png` in `dir`, sorted by numeric stem. Files with
/// non-numeric stems are ignored.
FrameSequence load_frame_sequence(const std::filesystem::path& dir, std::string source_tag = "dataset");

/// `<id zero-padded to 6>.png`
std::string frame_filename(std::int64_t id);

/// Writes each frame under frame_filename(id).
void save_frame_sequence(const std::filesystem::path& dir, const FrameSequence& seq);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_real(double value);

}  // namespace pitchblur
