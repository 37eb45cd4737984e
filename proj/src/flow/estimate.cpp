#include "pitchblur/flow/estimate.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <vector>

#include "pitchblur/core/parallel.hpp"

namespace pitchblur {
namespace {

using Plane = Eigen::Array<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using IntPlane = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Plane luma(const Frame& frame) {
  const auto& rgb = frame.rgb();
  Plane out(rgb.height(), rgb.width());
  for (int y = 0; y < rgb.height(); ++y)
    for (int x = 0; x < rgb.width(); ++x)
      out(y, x) = 0.299f * rgb(x, y, 0) + 0.587f * rgb(x, y, 1) + 0.114f * rgb(x, y, 2);
  return out;
}

/// 2x2 box downsample; odd trailing rows/columns are folded into the last
/// output sample through clamping.
Plane downsample(const Plane& in) {
  const Eigen::Index h = (in.rows() + 1) / 2;
  const Eigen::Index w = (in.cols() + 1) / 2;
  Plane out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    const Eigen::Index y0 = 2 * y;
    const Eigen::Index y1 = std::min<Eigen::Index>(2 * y + 1, in.rows() - 1);
    for (Eigen::Index x = 0; x < w; ++x) {
      const Eigen::Index x0 = 2 * x;
      const Eigen::Index x1 = std::min<Eigen::Index>(2 * x + 1, in.cols() - 1);
      out(y, x) = 0.25f * (in(y0, x0) + in(y0, x1) + in(y1, x0) + in(y1, x1));
    }
  }
  return out;
}

struct Displacement {
  IntPlane dx;
  IntPlane dy;
};

void match_level(const Plane& a, const Plane& b, Displacement& flow, int block_radius, int search_radius,
                 unsigned threads) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  auto clamp_y = [rows](int y) { return std::clamp(y, 0, rows - 1); };
  auto clamp_x = [cols](int x) { return std::clamp(x, 0, cols - 1); };

  const IntPlane pred_x = flow.dx;
  const IntPlane pred_y = flow.dy;

  auto sad = [&](int x, int y, int dx, int dy) {
    float cost = 0;
    for (int by = -block_radius; by <= block_radius; ++by) {
      const int ay = clamp_y(y + by);
      const int bb = clamp_y(y + by + dy);
      for (int bx = -block_radius; bx <= block_radius; ++bx)
        cost += std::abs(a(ay, clamp_x(x + bx)) - b(bb, clamp_x(x + bx + dx)));
    }
    return cost;
  };

  parallel_for(0, static_cast<std::size_t>(rows), threads, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < cols; ++x) {
      // Search centre: the best of the own prediction, the 3x3 neighbour
      // predictions and zero. Candidates are visited in a fixed order and
      // earlier ones win ties.
      int px = pred_x(y, x);
      int py = pred_y(y, x);
      float centre_cost = sad(x, y, px, py);
      auto consider = [&](int cx, int cy) {
        if (cx == px && cy == py) return;
        const float c = sad(x, y, cx, cy);
        if (c < centre_cost) {
          centre_cost = c;
          px = cx;
          py = cy;
        }
      };
      for (int ny = -1; ny <= 1; ++ny)
        for (int nx = -1; nx <= 1; ++nx)
          consider(pred_x(clamp_y(y + ny), clamp_x(x + nx)), pred_y(clamp_y(y + ny), clamp_x(x + nx)));
      consider(0, 0);

      float best_cost = std::numeric_limits<float>::infinity();
      int best_dist = std::numeric_limits<int>::max();
      int best_ox = 0;
      int best_oy = 0;
      for (int oy = -search_radius; oy <= search_radius; ++oy) {
        for (int ox = -search_radius; ox <= search_radius; ++ox) {
          const float cost = sad(x, y, px + ox, py + oy);
          // Prefer the candidate closest to the prediction on equal cost so
          // flat regions keep the coarse estimate.
          const int dist = ox * ox + oy * oy;
          if (cost < best_cost || (cost == best_cost && dist < best_dist)) {
            best_cost = cost;
            best_dist = dist;
            best_ox = ox;
            best_oy = oy;
          }
        }
      }
      flow.dx(y, x) = px + best_ox;
      flow.dy(y, x) = py + best_oy;
    }
  });
}

/// Sequential forward and backward sweeps that adopt a neighbour's vector
/// when it matches strictly better. Single-threaded for a fixed visit order.
void propagate(const Plane& a, const Plane& b, Displacement& flow, int block_radius, int sweeps) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  auto sad = [&](int x, int y, int dx, int dy) {
    float cost = 0;
    for (int by = -block_radius; by <= block_radius; ++by) {
      const int ay = std::clamp(y + by, 0, rows - 1);
      const int bb = std::clamp(y + by + dy, 0, rows - 1);
      for (int bx = -block_radius; bx <= block_radius; ++bx)
        cost += std::abs(a(ay, std::clamp(x + bx, 0, cols - 1)) - b(bb, std::clamp(x + bx + dx, 0, cols - 1)));
    }
    return cost;
  };
  auto visit = [&](int x, int y, int step) {
    float best = sad(x, y, flow.dx(y, x), flow.dy(y, x));
    for (const auto& [nx, ny] : {std::pair{x - step, y}, std::pair{x, y - step}}) {
      if (nx < 0 || ny < 0 || nx >= cols || ny >= rows) continue;
      const int cx = flow.dx(ny, nx);
      const int cy = flow.dy(ny, nx);
      const float c = sad(x, y, cx, cy);
      if (c < best) {
        best = c;
        flow.dx(y, x) = cx;
        flow.dy(y, x) = cy;
      }
    }
  };
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int y = 0; y < rows; ++y)
      for (int x = 0; x < cols; ++x) visit(x, y, 1);
    for (int y = rows - 1; y >= 0; --y)
      for (int x = cols - 1; x >= 0; --x) visit(x, y, -1);
  }
}

Plane box_smooth(const Plane& in) {
  const Eigen::Index rows = in.rows();
  const Eigen::Index cols = in.cols();
  Plane out(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y)
    for (Eigen::Index x = 0; x < cols; ++x) {
      float sum = 0;
      for (Eigen::Index oy = -1; oy <= 1; ++oy)
        for (Eigen::Index ox = -1; ox <= 1; ++ox)
          sum += in(std::clamp<Eigen::Index>(y + oy, 0, rows - 1), std::clamp<Eigen::Index>(x + ox, 0, cols - 1));
      out(y, x) = sum / 9.0f;
    }
  return out;
}

}  // namespace

void validate(const FlowParams& p) {
  if (p.pyramid_levels < 1) throw ValidationError("flow pyramid_levels must be >= 1");
  if (p.block_radius < 0) throw ValidationError("flow block_radius must be >= 0");
  if (p.search_radius < 1) throw ValidationError("flow search_radius must be >= 1");
  if (p.smoothing_passes < 0) throw ValidationError("flow smoothing_passes must be >= 0");
}

int max_displacement(const FlowParams& p) { return p.search_radius * ((1 << p.pyramid_levels) - 1); }

FlowField estimate_flow(const Frame& frame_a, const Frame& frame_b, const FlowParams& params, unsigned threads) {
  validate(params);
  if (frame_a.width() != frame_b.width() || frame_a.height() != frame_b.height())
    throw ValidationError("dimension mismatch between flow frames");

  std::vector<Plane> pyr_a{luma(frame_a)};
  std::vector<Plane> pyr_b{luma(frame_b)};
  const int min_size = 2 * params.block_radius + 2;
  while (static_cast<int>(pyr_a.size()) < params.pyramid_levels &&
         std::min(pyr_a.back().rows(), pyr_a.back().cols()) / 2 >= min_size) {
    pyr_a.push_back(downsample(pyr_a.back()));
    pyr_b.push_back(downsample(pyr_b.back()));
  }

  Displacement flow{IntPlane::Zero(pyr_a.back().rows(), pyr_a.back().cols()),
                    IntPlane::Zero(pyr_a.back().rows(), pyr_a.back().cols())};
  for (int level = static_cast<int>(pyr_a.size()) - 1; level >= 0; --level) {
    const Plane& a = pyr_a[level];
    if (flow.dx.rows() != a.rows() || flow.dx.cols() != a.cols()) {
      Displacement up{IntPlane(a.rows(), a.cols()), IntPlane(a.rows(), a.cols())};
      for (Eigen::Index y = 0; y < a.rows(); ++y)
        for (Eigen::Index x = 0; x < a.cols(); ++x) {
          const Eigen::Index cy = std::min(y / 2, flow.dx.rows() - 1);
          const Eigen::Index cx = std::min(x / 2, flow.dx.cols() - 1);
          up.dx(y, x) = 2 * flow.dx(cy, cx);
          up.dy(y, x) = 2 * flow.dy(cy, cx);
        }
      flow = std::move(up);
    }
    match_level(a, pyr_b[level], flow, params.block_radius, params.search_radius, threads);
    propagate(a, pyr_b[level], flow, params.block_radius, 2);
  }

  Plane dx = flow.dx.cast<float>();
  Plane dy = flow.dy.cast<float>();
  for (int pass = 0; pass < params.smoothing_passes; ++pass) {
    dx = box_smooth(dx);
    dy = box_smooth(dy);
  }
  return FlowField(std::move(dx), std::move(dy));
}

}  // namespace pitchblur
