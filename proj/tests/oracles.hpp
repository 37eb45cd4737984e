#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Each one follows the textbook formula with plain loops and shares
// no code path with the library beyond the data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "pitchblur/pitchblur.hpp"

namespace oracle {

using pitchblur::FlowField;
using pitchblur::PatchRegion;
using pitchblur::Pose;
using pitchblur::RgbImage;

/// Smooth RGB texture: a few random plane waves plus 3x3-box-filtered noise.
/// Correlated content keeps edge-replication effects small.
inline RgbImage textured_image(int w, int h, std::uint64_t seed, double noise = 20.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Wave {
    double fx, fy, phase, amp;
  };
  RgbImage img(w, h, 3);
  for (int c = 0; c < 3; ++c) {
    std::vector<Wave> waves(4);
    for (auto& wv : waves) wv = {0.02 + 0.2 * u(rng), 0.02 + 0.2 * u(rng), 6.283 * u(rng), 15 + 25 * u(rng)};
    std::vector<double> raw(static_cast<std::size_t>(w) * h);
    for (auto& r : raw) r = noise * (u(rng) - 0.5);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double v = 128;
        for (const auto& wv : waves) v += wv.amp * std::sin(wv.fx * x + wv.fy * y + wv.phase);
        double n = 0;
        int cnt = 0;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = x + dx, yy = y + dy;
            if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
            n += raw[static_cast<std::size_t>(yy) * w + xx];
            ++cnt;
          }
        img(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v + n / cnt), 0L, 255L));
      }
  }
  return img;
}

/// Uniform random bytes.
inline RgbImage noise_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RgbImage img(w, h, 3);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() & 0xff);
  return img;
}

/// Dense direct 2-D convolution of the region: every kernel cell is visited
/// in row-major order, samples outside the region repeat its nearest edge
/// pixel, and each sum is rounded half away from zero and clamped.
inline RgbImage naive_convolve(const RgbImage& src, const PatchRegion& r, const pitchblur::KernelWeights& k) {
  RgbImage out = src;
  const int size = static_cast<int>(k.rows());
  const int c = size / 2;
  for (int ch = 0; ch < src.channels(); ++ch)
    for (int y = 0; y < r.h; ++y)
      for (int x = 0; x < r.w; ++x) {
        double sum = 0;
        for (int v = 0; v < size; ++v)
          for (int u = 0; u < size; ++u) {
            const int sx = std::clamp(x - (u - c), 0, r.w - 1);
            const int sy = std::clamp(y - (v - c), 0, r.h - 1);
            sum += k(v, u) * src(r.x + sx, r.y + sy, ch);
          }
        double rounded = sum < 0 ? -std::floor(-sum + 0.5) : std::floor(sum + 0.5);
        out(r.x + x, r.y + y, ch) = static_cast<std::uint8_t>(std::clamp(rounded, 0.0, 255.0));
      }
  return out;
}

/// Kernel for angle omega and scale s by direct inverse mapping: a cell p
/// reads the line image at c + R(-omega) (p - c) / s. The line image is one
/// on the centre row for columns 0..size-1; its bilinear interpolant is the
/// product of a tent in y and a clipped trapezoid in x.
inline pitchblur::KernelWeights line_kernel_oracle(int size, double omega, double s) {
  const double c = size / 2;
  pitchblur::KernelWeights k(size, size);
  double total = 0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double px = x - c, py = y - c;
      const double sx = c + (std::cos(omega) * px + std::sin(omega) * py) / s;
      const double sy = c + (-std::sin(omega) * px + std::cos(omega) * py) / s;
      const double wy = std::max(0.0, 1.0 - std::abs(sy - c));
      double wx = 0;
      if (sx >= 0 && sx <= size - 1)
        wx = 1;
      else if (sx > -1 && sx < 0)
        wx = 1 + sx;
      else if (sx > size - 1 && sx < size)
        wx = size - sx;
      k(y, x) = wx * wy;
      total += k(y, x);
    }
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) k(y, x) /= total;
  return k;
}

inline double region_magnitude(const FlowField& f, const PatchRegion& r, pitchblur::MagnitudeMode mode) {
  double total = 0, sx = 0, sy = 0;
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x) {
      const double dx = f.dx()(y, x), dy = f.dy()(y, x);
      total += std::sqrt(dx * dx + dy * dy);
      sx += dx;
      sy += dy;
    }
  return mode == pitchblur::MagnitudeMode::MagnitudeSum ? total : std::sqrt(sx * sx + sy * sy);
}

/// Scores every region, sorts all of them, keeps the first n. Scores come
/// from the library so the comparison isolates the ranking; region_magnitude
/// checks the scores separately.
inline std::vector<PatchRegion> brute_force_select(const std::vector<PatchRegion>& regions, const FlowField& f, int n,
                                                   pitchblur::MagnitudeMode mode) {
  std::vector<std::pair<double, PatchRegion>> scored;
  for (const auto& r : regions) scored.emplace_back(pitchblur::patch_flow_magnitude(f, r, mode), r);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second.index < b.second.index;
  });
  std::vector<PatchRegion> out;
  for (int i = 0; i < n; ++i) out.push_back(scored[static_cast<std::size_t>(i)].second);
  return out;
}

/// Spatial squared-error mean plus one minus cosine, by scalar loops.
inline double pose_cost(const Pose& gt, const Pose& pred, double gs, double gtemp) {
  const auto J = gt.joints.rows(), D = gt.joints.cols();
  double sq = 0, dot = 0, na = 0, nb = 0;
  for (Eigen::Index j = 0; j < J; ++j)
    for (Eigen::Index d = 0; d < D; ++d) {
      const double a = gt.joints(j, d), b = pred.joints(j, d);
      sq += (a - b) * (a - b);
      dot += a * b;
      na += a * a;
      nb += b * b;
    }
  const double cosine = (na > 0 && nb > 0) ? dot / (std::sqrt(na) * std::sqrt(nb)) : 0.0;
  return gs * sq / static_cast<double>(J) + gtemp * (1.0 - cosine);
}

struct BruteAlignment {
  double cost = std::numeric_limits<double>::infinity();
  std::size_t candidates = 0;
};

/// Minimum over every monotone injection of the shorter track into the
/// longer one, found by enumerating index combinations.
inline BruteAlignment exhaustive_alignment(const std::vector<Pose>& gt, const std::vector<Pose>& pred, double gs,
                                           double gtemp) {
  const bool gt_short = gt.size() <= pred.size();
  const std::size_t m = gt_short ? gt.size() : pred.size();
  const std::size_t n = gt_short ? pred.size() : gt.size();
  BruteAlignment best;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
  do {
    double total = 0;
    std::size_t i = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (pick[j]) {
        total += gt_short ? pose_cost(gt[i], pred[j], gs, gtemp) : pose_cost(gt[j], pred[i], gs, gtemp);
        ++i;
      }
    best.cost = std::min(best.cost, total);
    ++best.candidates;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

/// Pinhole projection of one joint, written out per coordinate.
inline std::pair<double, double> project_joint(const pitchblur::Camera& cam, double X, double Y, double Z) {
  const auto& R = cam.rotation;
  const auto& t = cam.translation;
  const double xc = R(0, 0) * X + R(0, 1) * Y + R(0, 2) * Z + t(0);
  const double yc = R(1, 0) * X + R(1, 1) * Y + R(1, 2) * Z + t(1);
  const double zc = R(2, 0) * X + R(2, 1) * Y + R(2, 2) * Z + t(2);
  return {cam.focal * xc / zc + cam.principal(0), cam.focal * yc / zc + cam.principal(1)};
}

inline double reprojection_loss(const pitchblur::Camera& cam, const Pose& p3, const Pose& p2) {
  double sum = 0;
  for (Eigen::Index j = 0; j < p3.joints.rows(); ++j) {
    const auto [u, v] = project_joint(cam, p3.joints(j, 0), p3.joints(j, 1), p3.joints(j, 2));
    sum += std::hypot(u - p2.joints(j, 0), v - p2.joints(j, 1));
  }
  return sum / static_cast<double>(p3.joints.rows());
}

/// Synthetic calibration scene: J joints with |X|, |Y| <= 1 and Z in [8, 12]
/// seen by an identity-extrinsic camera.
struct Scene {
  Pose points3d;
  Pose annotation;
  pitchblur::Camera truth;
};

inline Scene make_scene(std::mt19937_64& rng, double focal, int joints = 18, double noise = 0.0) {
  std::uniform_real_distribution<double> xy(-1.0, 1.0), z(8.0, 12.0), n(-noise, noise);
  Scene s;
  s.truth.focal = focal;
  s.truth.principal = {640.0, 360.0};
  s.points3d.frame_id = 0;
  s.points3d.joints.resize(joints, 3);
  s.annotation.frame_id = 0;
  s.annotation.joints.resize(joints, 2);
  for (int j = 0; j < joints; ++j) {
    s.points3d.joints(j, 0) = xy(rng);
    s.points3d.joints(j, 1) = xy(rng);
    s.points3d.joints(j, 2) = z(rng);
    const auto [u, v] = project_joint(s.truth, s.points3d.joints(j, 0), s.points3d.joints(j, 1), s.points3d.joints(j, 2));
    s.annotation.joints(j, 0) = u + (noise > 0 ? n(rng) : 0.0);
    s.annotation.joints(j, 1) = v + (noise > 0 ? n(rng) : 0.0);
  }
  return s;
}

/// Mean over joints of the per-joint distance, per frame, by scalar loops.
inline double frame_mpjpe(const Pose& a, const Pose& b) {
  double sum = 0;
  for (Eigen::Index j = 0; j < a.joints.rows(); ++j) {
    double sq = 0;
    for (Eigen::Index d = 0; d < a.joints.cols(); ++d) sq += (a.joints(j, d) - b.joints(j, d)) * (a.joints(j, d) - b.joints(j, d));
    sum += std::sqrt(sq);
  }
  return sum / static_cast<double>(a.joints.rows());
}

inline Pose random_pose(std::mt19937_64& rng, std::int64_t id, int joints, int dims, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Pose p;
  p.frame_id = id;
  p.joints.resize(joints, dims);
  for (Eigen::Index j = 0; j < joints; ++j)
    for (Eigen::Index d = 0; d < dims; ++d) p.joints(j, d) = g(rng);
  return p;
}

/// Sample variance of the 4-neighbour Laplacian over the interior of a
/// region of one channel.
inline double laplacian_variance(const RgbImage& img, const PatchRegion& r, int ch) {
  std::vector<double> vals;
  for (int y = r.y + 1; y < r.y + r.h - 1; ++y)
    for (int x = r.x + 1; x < r.x + r.w - 1; ++x)
      vals.push_back(4.0 * img(x, y, ch) - img(x - 1, y, ch) - img(x + 1, y, ch) - img(x, y - 1, ch) -
                     img(x, y + 1, ch));
  const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
  double var = 0;
  for (double v : vals) var += (v - mean) * (v - mean);
  return var / static_cast<double>(vals.size());
}

inline double region_mean(const RgbImage& img, const PatchRegion& r) {
  double s = 0;
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x)
      for (int c = 0; c < img.channels(); ++c) s += img(x, y, c);
  return s / (static_cast<double>(r.w) * r.h * img.channels());
}

}  // namespace oracle
