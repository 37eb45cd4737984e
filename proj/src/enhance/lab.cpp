#include <algorithm>
#include <cmath>

#include <Eigen/Core>
#include <Eigen/LU>

#include "pitchblur/enhance/enhance.hpp"

namespace pitchblur {
namespace {

// sRGB primaries, D65 white (IEC 61966-2-1).
const Eigen::Matrix3d& rgb_to_xyz() {
  static const Eigen::Matrix3d m = (Eigen::Matrix3d() << 0.4124564, 0.3575761, 0.1804375,  //
                                    0.2126729, 0.7151522, 0.0721750,                       //
                                    0.0193339, 0.1191920, 0.9503041)
                                       .finished();
  return m;
}

const Eigen::Matrix3d& xyz_to_rgb() {
  static const Eigen::Matrix3d m = rgb_to_xyz().inverse();
  return m;
}

const Eigen::Vector3d kWhite(0.95047, 1.0, 1.08883);
constexpr double kDelta = 6.0 / 29.0;

double srgb_to_linear(double c) { return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4); }
double linear_to_srgb(double c) { return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055; }

double lab_f(double t) { return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3 * kDelta * kDelta) + 4.0 / 29.0; }
double lab_f_inv(double t) { return t > kDelta ? t * t * t : 3 * kDelta * kDelta * (t - 4.0 / 29.0); }

}  // namespace

LabImage rgb_to_lab(const RgbImage& rgb) {
  LabImage lab(rgb.width(), rgb.height(), 3);
  for (int y = 0; y < rgb.height(); ++y)
    for (int x = 0; x < rgb.width(); ++x) {
      const Eigen::Vector3d linear(srgb_to_linear(rgb(x, y, 0) / 255.0), srgb_to_linear(rgb(x, y, 1) / 255.0),
                                   srgb_to_linear(rgb(x, y, 2) / 255.0));
      const Eigen::Vector3d xyz = (rgb_to_xyz() * linear).cwiseQuotient(kWhite);
      const double fx = lab_f(xyz.x());
      const double fy = lab_f(xyz.y());
      const double fz = lab_f(xyz.z());
      lab(x, y, 0) = static_cast<float>(116 * fy - 16);
      lab(x, y, 1) = static_cast<float>(500 * (fx - fy));
      lab(x, y, 2) = static_cast<float>(200 * (fy - fz));
    }
  return lab;
}

RgbImage lab_to_rgb(const LabImage& lab) {
  RgbImage rgb(lab.width(), lab.height(), 3);
  for (int y = 0; y < lab.height(); ++y)
    for (int x = 0; x < lab.width(); ++x) {
      const double fy = (lab(x, y, 0) + 16.0) / 116.0;
      const double fx = fy + lab(x, y, 1) / 500.0;
      const double fz = fy - lab(x, y, 2) / 200.0;
      const Eigen::Vector3d xyz = Eigen::Vector3d(lab_f_inv(fx), lab_f_inv(fy), lab_f_inv(fz)).cwiseProduct(kWhite);
      const Eigen::Vector3d linear = xyz_to_rgb() * xyz;
      for (int c = 0; c < 3; ++c) {
        const double v = 255.0 * linear_to_srgb(std::clamp(linear(c), 0.0, 1.0));
        rgb(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
      }
    }
  return rgb;
}

}  // namespace pitchblur
