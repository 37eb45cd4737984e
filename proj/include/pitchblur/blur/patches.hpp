#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pitchblur/core/image.hpp"
#include "pitchblur/flow/flow_field.hpp"

namespace pitchblur {

/// rows x cols equal tiles; the last row/column absorbs the remainder.
struct GridMode {
  int rows = 4;
  int cols = 5;
  bool operator==(const GridMode&) const = default;
};

/// size x size tiles from the top-left; partial tiles are clipped.
struct FixedMode {
  int size = 30;
  bool operator==(const FixedMode&) const = default;
};

using PatchMode = std::variant<GridMode, FixedMode>;

/// "grid:RxC" or "fixed:S".
PatchMode parse_patch_mode(std::string_view text);
std::string to_string(const PatchMode& mode);

/// Number of regions init_patches produces for a frame, when known without
/// a frame (grid mode); -1 for fixed mode.
int patch_count_hint(const PatchMode& mode);

/// Non-overlapping row-major partition of a width x height frame.
std::vector<PatchRegion> init_patches(int width, int height, const PatchMode& mode);

struct RankedPatch {
  PatchRegion region;
  double magnitude = 0;
};

/// Every region with its motion score, ordered by descending score and then
/// ascending region index.
std::vector<RankedPatch> rank_patches(std::span<const PatchRegion> regions, const FlowField& flow,
                                      MagnitudeMode mode = MagnitudeMode::MagnitudeSum);

/// The `n` highest-scoring regions in rank order.
std::vector<RankedPatch> select_ranked(std::span<const PatchRegion> regions, const FlowField& flow, int n,
                                       MagnitudeMode mode = MagnitudeMode::MagnitudeSum);

std::vector<PatchRegion> select_patches(std::span<const PatchRegion> regions, const FlowField& flow, int n,
                                        MagnitudeMode mode = MagnitudeMode::MagnitudeSum);

}  // namespace pitchblur
