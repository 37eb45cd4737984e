#include "pitchblur/blur/kernel.hpp"

#include <cmath>

#include <Eigen/LU>

#include "pitchblur/core/error.hpp"

namespace pitchblur {
namespace {

/// Rounds values within 1e-9 of an integer so axis-aligned kernels come out
/// exact instead of picking up cos(pi/2) ~ 6e-17 residue.
double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 ? r : v;
}

double sample_line(const KernelWeights& base, double sx, double sy) {
  const double x0 = std::floor(sx);
  const double y0 = std::floor(sy);
  const double fx = sx - x0;
  const double fy = sy - y0;
  auto at = [&](double yy, double xx) -> double {
    if (xx < 0 || yy < 0 || xx >= static_cast<double>(base.cols()) || yy >= static_cast<double>(base.rows()))
      return 0.0;
    return base(static_cast<Eigen::Index>(yy), static_cast<Eigen::Index>(xx));
  };
  return (1 - fy) * ((1 - fx) * at(y0, x0) + fx * at(y0, x0 + 1)) +
         fy * ((1 - fx) * at(y0 + 1, x0) + fx * at(y0 + 1, x0 + 1));
}

}  // namespace

Eigen::Matrix<double, 2, 3> kernel_affine(int size, double angle, double scale, KernelMatrix matrix) {
  const double c = size / 2;
  const double a = std::cos(angle) * scale;
  const double b = std::sin(angle) * scale;
  Eigen::Matrix<double, 2, 3> m;
  m(0, 0) = a;
  m(0, 1) = -b;
  m(0, 2) = c * (1 - a) + c * b;
  m(1, 0) = b;
  m(1, 1) = a;
  m(1, 2) = matrix == KernelMatrix::Centered ? c * (1 - a) - c * b : c * (1 - a) - c * a;
  return m;
}

MotionKernel build_motion_kernel(int size, double angle, double scale, KernelMatrix matrix) {
  if (size < 3 || size % 2 == 0) throw ValidationError("kernel size must be odd and >= 3, got " + std::to_string(size));
  if (!(scale > 0) || !std::isfinite(scale)) throw ValidationError("kernel scale must be positive");
  if (!std::isfinite(angle)) throw ValidationError("kernel angle must be finite");

  KernelWeights base = KernelWeights::Zero(size, size);
  base.row(size / 2).setOnes();

  const Eigen::Matrix<double, 2, 3> forward = kernel_affine(size, angle, scale, matrix);
  const Eigen::Matrix2d inverse = forward.leftCols<2>().inverse();
  const Eigen::Vector2d offset = forward.col(2);

  MotionKernel k{size, angle, scale, KernelWeights::Zero(size, size)};
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const Eigen::Vector2d src = inverse * (Eigen::Vector2d(x, y) - offset);
      k.weights(y, x) = sample_line(base, snap(src.x()), snap(src.y()));
    }

  const double total = k.weights.sum();
  if (!(total > 0)) throw ValidationError("motion kernel is empty after warping");
  k.weights /= total;
  return k;
}

KernelWeights gaussian_kernel(double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw ValidationError("gaussian sigma must be positive");
  const int radius = std::max(1, static_cast<int>(std::ceil(3 * sigma)));
  Eigen::VectorXd g(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) g(i + radius) = std::exp(-(i * i) / (2 * sigma * sigma));
  g /= g.sum();
  KernelWeights k = g * g.transpose();
  k /= k.sum();
  return k;
}

}  // namespace pitchblur
