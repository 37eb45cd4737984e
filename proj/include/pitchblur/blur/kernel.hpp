#pragma once

#include <Eigen/Core>

namespace pitchblur {

/// Which 2x3 affine map orients the line primitive.
enum class KernelMatrix {
  Centered,  ///< rotate-and-scale about the kernel center (default)
  Printed,   ///< the published matrix verbatim, whose second-row offset shifts the line
};

using KernelWeights = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Oriented line-streak blur filter with unit-sum, non-negative weights.
struct MotionKernel {
  int size = 0;        ///< odd, >= 3
  double angle = 0;    ///< radians
  double scale = 1;    ///< > 0
  KernelWeights weights;
};

/// Forward 2x3 map (kernel pixel coordinates, x = column) that carries the
/// horizontal line primitive onto the oriented streak.
Eigen::Matrix<double, 2, 3> kernel_affine(int size, double angle, double scale,
                                          KernelMatrix matrix = KernelMatrix::Centered);

/// Warps a one-pixel horizontal line of ones through row size/2 by
/// kernel_affine (bilinear, zero outside) and normalizes to unit sum.
MotionKernel build_motion_kernel(int size, double angle, double scale,
                                 KernelMatrix matrix = KernelMatrix::Centered);

/// Unit-sum isotropic Gaussian with radius ceil(3 sigma).
KernelWeights gaussian_kernel(double sigma);

}  // namespace pitchblur
