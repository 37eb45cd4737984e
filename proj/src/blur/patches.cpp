#include "pitchblur/blur/patches.hpp"

#include <algorithm>
#include <charconv>

namespace pitchblur {
namespace {

bool parse_int(std::string_view s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool ranks_before(const RankedPatch& a, const RankedPatch& b) {
  if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
  return a.region.index < b.region.index;
}

}  // namespace

PatchMode parse_patch_mode(std::string_view text) {
  if (text.starts_with("grid:")) {
    auto spec = text.substr(5);
    const auto x = spec.find('x');
    GridMode g;
    if (x != std::string_view::npos && parse_int(spec.substr(0, x), g.rows) && parse_int(spec.substr(x + 1), g.cols))
      return g;
  } else if (text.starts_with("fixed:")) {
    FixedMode f;
    if (parse_int(text.substr(6), f.size)) return f;
  }
  throw ValidationError("patch mode must be 'grid:RxC' or 'fixed:S', got '" + std::string(text) + "'");
}

std::string to_string(const PatchMode& mode) {
  if (const auto* g = std::get_if<GridMode>(&mode))
    return "grid:" + std::to_string(g->rows) + "x" + std::to_string(g->cols);
  return "fixed:" + std::to_string(std::get<FixedMode>(mode).size);
}

int patch_count_hint(const PatchMode& mode) {
  if (const auto* g = std::get_if<GridMode>(&mode)) return g->rows * g->cols;
  return -1;
}

std::vector<PatchRegion> init_patches(int width, int height, const PatchMode& mode) {
  if (width <= 0 || height <= 0) throw ValidationError("frame dimensions must be positive");
  std::vector<PatchRegion> regions;

  if (const auto* g = std::get_if<GridMode>(&mode)) {
    if (g->rows < 1 || g->cols < 1) throw ValidationError("grid dimensions must be >= 1");
    if (g->rows > height || g->cols > width)
      throw ValidationError("grid " + to_string(mode) + " exceeds frame " + std::to_string(width) + "x" +
                            std::to_string(height));
    const int tile_w = width / g->cols;
    const int tile_h = height / g->rows;
    for (int r = 0; r < g->rows; ++r)
      for (int c = 0; c < g->cols; ++c) {
        const int x = c * tile_w;
        const int y = r * tile_h;
        const int w = c == g->cols - 1 ? width - x : tile_w;
        const int h = r == g->rows - 1 ? height - y : tile_h;
        regions.push_back({static_cast<int>(regions.size()), x, y, w, h});
      }
    return regions;
  }

  const int size = std::get<FixedMode>(mode).size;
  if (size < 1) throw ValidationError("patch size must be >= 1");
  if (size > width || size > height)
    throw ValidationError("patch size " + std::to_string(size) + " exceeds frame " + std::to_string(width) + "x" +
                          std::to_string(height));
  for (int y = 0; y < height; y += size)
    for (int x = 0; x < width; x += size)
      regions.push_back({static_cast<int>(regions.size()), x, y, std::min(size, width - x), std::min(size, height - y)});
  return regions;
}

std::vector<RankedPatch> rank_patches(std::span<const PatchRegion> regions, const FlowField& flow,
                                      MagnitudeMode mode) {
  std::vector<RankedPatch> ranked;
  ranked.reserve(regions.size());
  for (const auto& r : regions) ranked.push_back({r, patch_flow_magnitude(flow, r, mode)});
  std::sort(ranked.begin(), ranked.end(), ranks_before);
  return ranked;
}

std::vector<RankedPatch> select_ranked(std::span<const PatchRegion> regions, const FlowField& flow, int n,
                                       MagnitudeMode mode) {
  if (n < 0) throw ValidationError("patch count must be non-negative");
  if (static_cast<std::size_t>(n) > regions.size())
    throw ValidationError("N exceeds patch count (" + std::to_string(n) + " > " + std::to_string(regions.size()) +
                          ")");
  std::vector<RankedPatch> ranked;
  ranked.reserve(regions.size());
  for (const auto& r : regions) ranked.push_back({r, patch_flow_magnitude(flow, r, mode)});
  std::partial_sort(ranked.begin(), ranked.begin() + n, ranked.end(), ranks_before);
  ranked.resize(n);
  return ranked;
}

std::vector<PatchRegion> select_patches(std::span<const PatchRegion> regions, const FlowField& flow, int n,
                                        MagnitudeMode mode) {
  std::vector<PatchRegion> out;
  for (auto& r : select_ranked(regions, flow, n, mode)) out.push_back(r.region);
  return out;
}

}  // namespace pitchblur
