#include "pitchblur/core/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <png.h>

namespace pitchblur {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

struct Header {
  int joints = 0;
  int dims = 0;
  std::vector<std::string> names;
};

Header parse_header(std::string_view line) {
  Header h;
  auto fields = split_commas(line.substr(1));
  for (auto field : fields) {
    if (field.starts_with("J=")) {
      if (!parse_number(field.substr(2), h.joints) || h.joints <= 0)
        throw ValidationError("bad joint count in keypoint header");
    } else if (field.starts_with("gamma=")) {
      if (!parse_number(field.substr(6), h.dims) || (h.dims != 2 && h.dims != 3))
        throw ValidationError("bad gamma in keypoint header");
    } else if (!field.empty()) {
      h.names.emplace_back(field);
    }
  }
  if (h.joints == 0 || h.dims == 0) throw ValidationError("keypoint header must declare J and gamma");
  if (h.names.empty()) h.names = default_joint_names(h.joints);
  if (static_cast<int>(h.names.size()) != h.joints)
    throw ValidationError("keypoint header names " + std::to_string(h.names.size()) + " joints but declares J=" +
                          std::to_string(h.joints));
  return h;
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("cannot format real");
  return std::string(buf, ptr);
}

PoseTrackLoad read_pose_track(std::istream& in, std::optional<int> dims) {
  std::optional<Header> header;
  std::vector<Pose> poses;
  std::size_t skipped = 0;
  std::string raw;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (!header) {
      if (line.front() != '#') throw ValidationError("keypoint file lacks a '#J=..,gamma=..' header line");
      header = parse_header(line);
      if (dims && *dims != header->dims)
        throw ValidationError("keypoint file has gamma=" + std::to_string(header->dims) + ", expected " +
                              std::to_string(*dims));
      continue;
    }
    if (line.front() == '#') continue;

    auto fields = split_commas(line);
    const std::size_t expected = 1 + static_cast<std::size_t>(header->joints) * header->dims;
    if (fields.size() != expected)
      throw ValidationError("inconsistent J across rows (line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " + std::to_string(expected) + ")");

    Pose pose;
    pose.joints.resize(header->joints, header->dims);
    bool ok = parse_number(fields[0], pose.frame_id);
    for (std::size_t k = 1; ok && k < fields.size(); ++k) {
      double v = 0;
      ok = parse_number(fields[k], v);
      if (ok && !std::isfinite(v))
        throw ValidationError("non-finite coordinate on line " + std::to_string(line_no));
      pose.joints((k - 1) / header->dims, (k - 1) % header->dims) = v;
    }
    if (!ok) {
      ++skipped;
      continue;
    }
    if (!poses.empty() && pose.frame_id <= poses.back().frame_id) throw ValidationError("non-monotone frame ids");
    poses.push_back(std::move(pose));
  }

  if (!header || poses.empty()) throw ValidationError("empty track");
  return {PoseTrack(header->dims, std::move(header->names), std::move(poses)), skipped};
}

PoseTrackLoad load_pose_track(const std::filesystem::path& path, std::optional<int> dims) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open keypoint file " + path.string());
  return read_pose_track(in, dims);
}

void write_pose_track(std::ostream& out, const PoseTrack& track) {
  out << "#J=" << track.joint_count() << ",gamma=" << track.dims();
  for (const auto& name : track.joint_names()) out << ',' << name;
  out << '\n';
  for (const auto& pose : track.poses()) {
    out << pose.frame_id;
    for (Eigen::Index j = 0; j < pose.joints.rows(); ++j)
      for (Eigen::Index d = 0; d < pose.joints.cols(); ++d) out << ',' << format_real(pose.joints(j, d));
    out << '\n';
  }
}

void save_pose_track(const std::filesystem::path& path, const PoseTrack& track) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_pose_track(out, track);
}

std::vector<BoundingBox> load_boxes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open bounding-box file " + path.string());
  std::vector<BoundingBox> boxes;
  std::string raw;
  bool first = true;
  while (std::getline(in, raw)) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_commas(line);
    BoundingBox b;
    const bool ok = fields.size() == 5 && parse_number(fields[0], b.frame_id) && parse_number(fields[1], b.x) &&
                    parse_number(fields[2], b.y) && parse_number(fields[3], b.w) && parse_number(fields[4], b.h);
    if (!ok) {
      if (first) {
        first = false;
        continue;  // header row
      }
      throw ValidationError("malformed bounding-box row: " + std::string(line));
    }
    first = false;
    if (!(b.w > 0) || !(b.h > 0))
      throw ValidationError("bounding box for frame " + std::to_string(b.frame_id) + " has non-positive size");
    boxes.push_back(b);
  }
  return boxes;
}

RgbImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw ValidationError("unreadable image " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGB;
  RgbImage rgb(static_cast<int>(image.width), static_cast<int>(image.height), 3);
  if (!png_image_finish_read(&image, nullptr, rgb.data().data(), 0, nullptr)) {
    png_image_free(&image);
    throw ValidationError("unreadable image " + path.string() + ": " + image.message);
  }
  return rgb;
}

void write_png(const std::filesystem::path& path, const RgbImage& rgb) {
  if (rgb.channels() != 3) throw Error("write_png expects RGB");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(rgb.width());
  image.height = static_cast<png_uint_32>(rgb.height());
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, rgb.data().data(), 0, nullptr))
    throw Error("cannot write " + path.string() + ": " + image.message);
}

FrameSequence load_frame_sequence(const std::filesystem::path& dir, std::string source_tag) {
  if (!std::filesystem::is_directory(dir)) throw ValidationError("not a directory: " + dir.string());
  std::vector<std::pair<std::int64_t, std::filesystem::path>> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext != ".png") continue;
    std::int64_t id = 0;
    if (!parse_number(std::string_view(entry.path().stem().string()), id)) continue;
    files.emplace_back(id, entry.path());
  }
  if (files.empty()) throw ValidationError("no frames in " + dir.string());
  std::sort(files.begin(), files.end());
  for (std::size_t i = 1; i < files.size(); ++i)
    if (files[i].first == files[i - 1].first)
      throw ValidationError("duplicate frame id " + std::to_string(files[i].first));

  std::vector<Frame> frames;
  frames.reserve(files.size());
  for (const auto& [id, path] : files) {
    frames.emplace_back(id, read_png(path));
    if (frames.back().width() != frames.front().width() || frames.back().height() != frames.front().height())
      throw ValidationError("mixed resolutions: " + path.string());
  }
  return FrameSequence(std::move(frames), std::move(source_tag));
}

std::string frame_filename(std::int64_t id) {
  std::ostringstream name;
  name << std::setw(6) << std::setfill('0') << id << ".png";
  return name.str();
}

void save_frame_sequence(const std::filesystem::path& dir, const FrameSequence& seq) {
  std::filesystem::create_directories(dir);
  for (const auto& frame : seq.frames()) write_png(dir / frame_filename(frame.id()), frame.rgb());
}

}  // namespace pitchblur
