#pragma once

#include "pitchblur/core/image.hpp"
#include "pitchblur/flow/flow_field.hpp"

namespace pitchblur {

struct FlowParams {
  int pyramid_levels = 3;    ///< >= 1; level 0 is full resolution
  int block_radius = 2;      ///< SAD window is (2r+1)^2
  int search_radius = 2;     ///< per-level search around the upsampled estimate
  int smoothing_passes = 1;  ///< 3x3 box passes over the final field
};

/// Throws ValidationError on out-of-range parameters.
void validate(const FlowParams& params);

/// Coarse-to-fine block matching on luma with sum of absolute differences.
/// Border blocks sample with clamped coordinates. Rows are processed on up
/// to `threads` workers; the result does not depend on the worker count.
FlowField estimate_flow(const Frame& frame_a, const Frame& frame_b, const FlowParams& params = {},
                        unsigned threads = 1);

/// Largest displacement (per axis) the pyramid search can represent.
int max_displacement(const FlowParams& params);

}  // namespace pitchblur
