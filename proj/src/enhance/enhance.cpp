#include "pitchblur/enhance/enhance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace pitchblur {
namespace {

constexpr int kBins = 256;
constexpr double kMaxL = 100.0;

int bin_of(float l) { return std::clamp(static_cast<int>(std::floor(l * (kBins / kMaxL))), 0, kBins - 1); }

/// Equalization lookup for one tile; `identity` when the tile holds a single
/// luminosity bin and equalization would only shift it.
struct TileMap {
  bool identity = true;
  std::array<float, kBins> lut{};

  float operator()(float l) const { return identity ? l : lut[bin_of(l)]; }
};

TileMap build_tile_map(const LabImage& lab, int x0, int x1, int y0, int y1, double clip_limit) {
  std::array<long, kBins> hist{};
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) hist[bin_of(lab(x, y, 0))]++;

  TileMap map;
  const long occupied = std::count_if(hist.begin(), hist.end(), [](long h) { return h > 0; });
  if (occupied <= 1) return map;
  map.identity = false;

  const long pixels = static_cast<long>(x1 - x0) * (y1 - y0);
  const long clip = std::max(1L, static_cast<long>(clip_limit * pixels / kBins));
  long excess = 0;
  for (long& h : hist)
    if (h > clip) {
      excess += h - clip;
      h = clip;
    }
  const long share = excess / kBins;
  const long residual = excess % kBins;
  for (long& h : hist) h += share;
  if (residual > 0) {
    const long step = std::max(1L, kBins / residual);
    for (long b = 0, left = residual; b < kBins && left > 0; b += step, --left) hist[b]++;
  }

  long cdf = 0;
  for (int b = 0; b < kBins; ++b) {
    cdf += hist[b];
    map.lut[b] = static_cast<float>(kMaxL * static_cast<double>(cdf) / static_cast<double>(pixels));
  }
  return map;
}

/// Tile boundaries and centers along one axis.
struct Axis {
  std::vector<int> start;
  std::vector<double> center;

  Axis(int length, int tiles) {
    for (int t = 0; t <= tiles; ++t) start.push_back(static_cast<int>(static_cast<long>(t) * length / tiles));
    for (int t = 0; t < tiles; ++t) center.push_back(0.5 * (start[t] + start[t + 1]));
  }

  /// Lower tile index and weight of the upper neighbour for pixel `p`.
  std::pair<int, double> locate(int p) const {
    const double pos = p + 0.5;
    const int n = static_cast<int>(center.size());
    if (pos <= center.front()) return {0, 0.0};
    if (pos >= center.back()) return {n - 1, 0.0};
    int t = static_cast<int>(std::upper_bound(center.begin(), center.end(), pos) - center.begin()) - 1;
    return {t, (pos - center[t]) / (center[t + 1] - center[t])};
  }
};

}  // namespace

void validate(const EnhanceConfig& cfg) {
  if (!(cfg.margin >= 0)) throw ValidationError("margin must be >= 0");
  if (!(cfg.clip_limit > 0)) throw ValidationError("clip limit must be positive");
  if (cfg.tile_rows < 1 || cfg.tile_cols < 1) throw ValidationError("tile grid must be at least 1x1");
}

Frame crop(const Frame& frame, const BoundingBox& box, double margin) {
  if (!(margin >= 0)) throw ValidationError("margin must be >= 0");
  if (!(box.w > 0) || !(box.h > 0)) throw ValidationError("bounding box has non-positive size");
  const double px = margin * box.w;
  const double py = margin * box.h;
  const int x0 = std::max(0, static_cast<int>(std::floor(box.x - px)));
  const int y0 = std::max(0, static_cast<int>(std::floor(box.y - py)));
  const int x1 = std::min(frame.width(), static_cast<int>(std::ceil(box.x + box.w + px)));
  const int y1 = std::min(frame.height(), static_cast<int>(std::ceil(box.y + box.h + py)));
  if (x1 <= x0 || y1 <= y0) throw ValidationError("bounding box does not intersect the frame");

  RgbImage out(x1 - x0, y1 - y0, 3);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x)
      for (int c = 0; c < 3; ++c) out(x - x0, y - y0, c) = frame.rgb()(x, y, c);
  return Frame(frame.id(), std::move(out));
}

LabImage enhance_luminosity(const LabImage& lab, const EnhanceConfig& cfg) {
  validate(cfg);
  if (lab.channels() != 3) throw ValidationError("LAB raster must have 3 channels");
  const int width = lab.width();
  const int height = lab.height();

  float lmin = lab(0, 0, 0);
  float lmax = lmin;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      lmin = std::min(lmin, lab(x, y, 0));
      lmax = std::max(lmax, lab(x, y, 0));
    }
  if (lmin == lmax) return lab;

  const int rows = std::min(cfg.tile_rows, height);
  const int cols = std::min(cfg.tile_cols, width);
  const Axis ax(width, cols);
  const Axis ay(height, rows);

  std::vector<TileMap> maps;
  maps.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      maps.push_back(build_tile_map(lab, ax.start[c], ax.start[c + 1], ay.start[r], ay.start[r + 1], cfg.clip_limit));
  auto tile = [&](int r, int c) -> const TileMap& { return maps[static_cast<std::size_t>(r) * cols + c]; };

  LabImage out = lab;
  for (int y = 0; y < height; ++y) {
    const auto [r0, wy] = ay.locate(y);
    const int r1 = std::min(r0 + 1, rows - 1);
    for (int x = 0; x < width; ++x) {
      const auto [c0, wx] = ax.locate(x);
      const int c1 = std::min(c0 + 1, cols - 1);
      const float l = lab(x, y, 0);
      const double top = (1 - wx) * tile(r0, c0)(l) + wx * tile(r0, c1)(l);
      const double bottom = (1 - wx) * tile(r1, c0)(l) + wx * tile(r1, c1)(l);
      out(x, y, 0) = static_cast<float>((1 - wy) * top + wy * bottom);
    }
  }
  return out;
}

Frame enhance_frame(const Frame& frame, const BoundingBox& box, const EnhanceConfig& cfg) {
  validate(cfg);
  const Frame cropped = crop(frame, box, cfg.margin);
  return Frame(frame.id(), lab_to_rgb(enhance_luminosity(rgb_to_lab(cropped.rgb()), cfg)));
}

}  // namespace pitchblur
