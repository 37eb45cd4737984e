#include "pitchblur/flow/flow_field.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "pitchblur/core/error.hpp"

namespace pitchblur {
namespace {

constexpr float kFloMagic = 202021.25f;

static_assert(std::endian::native == std::endian::little, "flow file I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <typename T>
bool get(std::istream& in, T& value) {
  char bytes[sizeof(T)];
  if (!in.read(bytes, sizeof(T))) return false;
  std::memcpy(&value, bytes, sizeof(T));
  return true;
}

}  // namespace

FlowField::FlowField(int width, int height) {
  if (width <= 0 || height <= 0) throw ValidationError("flow field dimensions must be positive");
  dx_ = FlowPlane::Zero(height, width);
  dy_ = FlowPlane::Zero(height, width);
}

FlowField::FlowField(FlowPlane dx, FlowPlane dy) : dx_(std::move(dx)), dy_(std::move(dy)) {
  if (dx_.rows() != dy_.rows() || dx_.cols() != dy_.cols()) throw ValidationError("flow planes differ in size");
  if (dx_.size() == 0) throw ValidationError("flow field dimensions must be positive");
  if (!dx_.allFinite() || !dy_.allFinite()) throw ValidationError("non-finite flow vector");
}

bool FlowField::bit_equal(const FlowField& other) const {
  if (width() != other.width() || height() != other.height()) return false;
  const auto bytes = static_cast<std::size_t>(dx_.size()) * sizeof(float);
  return std::memcmp(dx_.data(), other.dx_.data(), bytes) == 0 &&
         std::memcmp(dy_.data(), other.dy_.data(), bytes) == 0;
}

double patch_flow_magnitude(const FlowField& flow, const PatchRegion& region, MagnitudeMode mode) {
  check_region(region, flow.width(), flow.height());
  const auto dx = flow.dx().block(region.y, region.x, region.h, region.w).cast<double>();
  const auto dy = flow.dy().block(region.y, region.x, region.h, region.w).cast<double>();
  if (mode == MagnitudeMode::VectorSum) return std::hypot(dx.sum(), dy.sum());
  return (dx.square() + dy.square()).sqrt().sum();
}

void export_flow(const std::filesystem::path& path, const FlowField& flow) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  put(out, kFloMagic);
  put(out, static_cast<std::int32_t>(flow.width()));
  put(out, static_cast<std::int32_t>(flow.height()));
  std::vector<float> row(static_cast<std::size_t>(flow.width()) * 2);
  for (int y = 0; y < flow.height(); ++y) {
    for (int x = 0; x < flow.width(); ++x) {
      row[2 * x] = flow.dx()(y, x);
      row[2 * x + 1] = flow.dy()(y, x);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw Error("short write to " + path.string());
}

FlowField import_flow(const std::filesystem::path& path, std::optional<std::pair<int, int>> expected_dims) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open flow file " + path.string());
  float magic = 0;
  std::int32_t width = 0;
  std::int32_t height = 0;
  if (!get(in, magic) || magic != kFloMagic) throw ValidationError("not a flow file: " + path.string());
  if (!get(in, width) || !get(in, height)) throw ValidationError("truncated flow header: " + path.string());
  if (width <= 0 || height <= 0 || width > (1 << 16) || height > (1 << 16))
    throw ValidationError("implausible flow dimensions in " + path.string());
  if (expected_dims && (expected_dims->first != width || expected_dims->second != height))
    throw ValidationError("flow dimension mismatch: file is " + std::to_string(width) + "x" + std::to_string(height) +
                          ", expected " + std::to_string(expected_dims->first) + "x" +
                          std::to_string(expected_dims->second));

  std::vector<float> payload(static_cast<std::size_t>(width) * height * 2);
  if (!in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size() * sizeof(float))))
    throw ValidationError("truncated flow payload: " + path.string());

  FlowPlane dx(height, width);
  FlowPlane dy(height, width);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const std::size_t k = (static_cast<std::size_t>(y) * width + x) * 2;
      dx(y, x) = payload[k];
      dy(y, x) = payload[k + 1];
    }
  return FlowField(std::move(dx), std::move(dy));
}

}  // namespace pitchblur
