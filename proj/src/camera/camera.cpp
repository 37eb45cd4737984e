#include "pitchblur/camera/camera.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/LU>

#include "pitchblur/core/io.hpp"

namespace pitchblur {
namespace {

constexpr double kMaxFocal = 1e6;

void check_pairs(std::span<const Pose> points3d, std::span<const Pose> annotated2d) {
  if (points3d.empty()) throw ValidationError("calibration needs at least one reference frame");
  if (points3d.size() != annotated2d.size()) throw ValidationError("reference frame count mismatch");
  for (std::size_t n = 0; n < points3d.size(); ++n) {
    if (points3d[n].dims() != 3 || annotated2d[n].dims() != 2)
      throw ValidationError("calibration expects 3-D points and 2-D annotations");
    if (points3d[n].joint_count() != annotated2d[n].joint_count() || points3d[n].joint_count() == 0)
      throw ValidationError("joint count mismatch between 3-D points and annotation");
  }
}

/// Parameter vector: [f] or [f, tx, ty, tz].
Camera with_params(const Camera& base, const Eigen::VectorXd& p) {
  Camera cam = base;
  cam.focal = p(0);
  if (p.size() == 4) cam.translation = p.tail<3>();
  return cam;
}

Eigen::VectorXd params_of(const Camera& cam, bool with_translation) {
  Eigen::VectorXd p(with_translation ? 4 : 1);
  p(0) = cam.focal;
  if (with_translation) p.tail<3>() = cam.translation;
  return p;
}

/// Analytic gradient with respect to [f] or [f, t].
Eigen::VectorXd analytic_gradient(const Camera& cam, std::span<const Pose> points3d, std::span<const Pose> annotated2d,
                                  bool with_translation) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(with_translation ? 4 : 1);
  for (std::size_t n = 0; n < points3d.size(); ++n) {
    const JointMatrix& world = points3d[n].joints;
    const JointMatrix projected = project_points(world, cam);
    Eigen::VectorXd frame_grad = Eigen::VectorXd::Zero(grad.size());
    for (Eigen::Index j = 0; j < world.rows(); ++j) {
      const Eigen::Vector3d pc = cam.rotation * world.row(j).transpose() + cam.translation;
      const Eigen::Vector2d q(pc.x() / pc.z(), pc.y() / pc.z());
      const Eigen::Vector2d r = (projected.row(j) - annotated2d[n].joints.row(j)).transpose();
      const double norm = r.norm();
      if (norm == 0) continue;
      const Eigen::Vector2d unit = r / norm;
      frame_grad(0) += unit.dot(q);
      if (with_translation) {
        const double f_over_z = cam.focal / pc.z();
        frame_grad(1) += unit.x() * f_over_z;
        frame_grad(2) += unit.y() * f_over_z;
        frame_grad(3) += -f_over_z * unit.dot(q);
      }
    }
    grad += frame_grad / static_cast<double>(world.rows());
  }
  return grad / static_cast<double>(points3d.size());
}

Eigen::VectorXd numeric_gradient(const Camera& cam, std::span<const Pose> points3d, std::span<const Pose> annotated2d,
                                 bool with_translation) {
  const Eigen::VectorXd p = params_of(cam, with_translation);
  Eigen::VectorXd grad(p.size());
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double h = k == 0 ? std::max(1e-6 * p(0), 1e-3) : 1e-6 * std::max(1.0, std::abs(p(k)));
    Eigen::VectorXd hi = p, lo = p;
    hi(k) += h;
    lo(k) -= h;
    grad(k) = (reprojection_loss(with_params(cam, hi), points3d, annotated2d) -
               reprojection_loss(with_params(cam, lo), points3d, annotated2d)) /
              (2 * h);
  }
  return grad;
}

Eigen::VectorXd gradient(const Camera& cam, std::span<const Pose> points3d, std::span<const Pose> annotated2d,
                         GradientMode mode, bool with_translation) {
  return mode == GradientMode::Analytic ? analytic_gradient(cam, points3d, annotated2d, with_translation)
                                        : numeric_gradient(cam, points3d, annotated2d, with_translation);
}

}  // namespace

void validate(const Camera& cam) {
  if (!(cam.focal > 0) || !std::isfinite(cam.focal)) throw ValidationError("focal length must be positive");
  const Eigen::Matrix3d& r = cam.rotation;
  if (!(r.transpose() * r - Eigen::Matrix3d::Identity()).isZero(1e-9) || std::abs(r.determinant() - 1.0) > 1e-9)
    throw ValidationError("extrinsic rotation must be orthonormal with determinant +1");
  if (!cam.principal.allFinite() || !cam.translation.allFinite()) throw ValidationError("non-finite camera parameter");
}

void validate(const OptimizerConfig& opt) {
  if (!(opt.learning_rate > 0)) throw ValidationError("learning rate must be positive");
  if (opt.max_iters < 1) throw ValidationError("max_iters must be >= 1");
  if (!(opt.tolerance >= 0)) throw ValidationError("tolerance must be non-negative");
}

Pose project(const Pose& points3d, const Camera& cam) {
  if (points3d.dims() != 3) throw ValidationError("project expects a 3-D pose");
  return Pose{points3d.frame_id, project_points(points3d.joints, cam)};
}

double reprojection_loss(const Camera& cam, std::span<const Pose> points3d, std::span<const Pose> annotated2d) {
  check_pairs(points3d, annotated2d);
  double total = 0;
  for (std::size_t n = 0; n < points3d.size(); ++n) {
    const auto projected = project_points(points3d[n].joints, cam);
    total += (projected - annotated2d[n].joints).rowwise().norm().mean();
  }
  return total / static_cast<double>(points3d.size());
}

double reprojection_loss(const Camera& cam, const Pose& points3d, const Pose& annotated2d) {
  return reprojection_loss(cam, std::span(&points3d, 1), std::span(&annotated2d, 1));
}

double loss_gradient(const Camera& cam, std::span<const Pose> points3d, std::span<const Pose> annotated2d,
                     GradientMode mode) {
  check_pairs(points3d, annotated2d);
  return gradient(cam, points3d, annotated2d, mode, false)(0);
}

double loss_gradient(const Camera& cam, const Pose& points3d, const Pose& annotated2d, GradientMode mode) {
  return loss_gradient(cam, std::span(&points3d, 1), std::span(&annotated2d, 1), mode);
}

CalibrationResult optimize_focal(const Camera& cam0, std::span<const Pose> points3d,
                                 std::span<const Pose> annotated2d, const OptimizerConfig& opt) {
  validate(cam0);
  validate(opt);
  check_pairs(points3d, annotated2d);

  const bool with_t = opt.refine_translation;
  Eigen::VectorXd p = params_of(cam0, with_t);
  double loss = reprojection_loss(cam0, points3d, annotated2d);
  CalibrationResult result{cam0, {{0, cam0.focal, loss}}, false};

  auto try_loss = [&](const Eigen::VectorXd& cand, double& out) {
    if (!(cand(0) > 0) || !(cand(0) < kMaxFocal)) return false;
    try {
      out = reprojection_loss(with_params(cam0, cand), points3d, annotated2d);
    } catch (const ValidationError&) {
      return false;  // a joint fell behind the camera
    }
    return std::isfinite(out);
  };

  double step = opt.learning_rate;
  for (int iter = 1; iter <= opt.max_iters; ++iter) {
    const Eigen::VectorXd g = gradient(with_params(cam0, p), points3d, annotated2d, opt.gradient, with_t);
    if (g.isZero(0.0)) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd cand;
    double cand_loss = 0;
    if (opt.backtracking) {
      bool accepted = false;
      for (int halving = 0; halving < 80 && !accepted; ++halving) {
        cand = p - step * g;
        accepted = try_loss(cand, cand_loss) && cand_loss < loss;
        if (!accepted) step *= 0.5;
      }
      if (!accepted) {
        result.converged = true;  // no descent step is representable
        break;
      }
    } else {
      cand = p - opt.learning_rate * g;
      if (!(cand(0) > 0) || !(cand(0) < kMaxFocal))
        throw Error("focal length diverged to " + format_real(cand(0)) + " at iteration " + std::to_string(iter));
      cand_loss = reprojection_loss(with_params(cam0, cand), points3d, annotated2d);
    }

    const double change = std::abs(loss - cand_loss);
    p = cand;
    loss = cand_loss;
    result.trace.push_back({iter, p(0), loss});
    if (opt.backtracking) step *= 2;
    if (change < opt.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.camera = with_params(cam0, p);
  return result;
}

CalibrationResult optimize_focal(const Camera& cam0, const Pose& points3d, const Pose& annotated2d,
                                 const OptimizerConfig& opt) {
  return optimize_focal(cam0, std::span(&points3d, 1), std::span(&annotated2d, 1), opt);
}

void load_extrinsics(const std::filesystem::path& path, Camera& cam) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open extrinsics file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream values(text);
  double v[12];
  for (double& x : v)
    if (!(values >> x)) throw ValidationError("extrinsics file must hold 12 reals");
  double extra = 0;
  if (values >> extra) throw ValidationError("extrinsics file must hold exactly 12 reals");
  cam.rotation = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(v);
  cam.translation = Eigen::Vector3d(v[9], v[10], v[11]);
}

void write_camera(std::ostream& out, const Camera& cam) {
  out << "f " << format_real(cam.focal) << '\n';
  out << "cx " << format_real(cam.principal.x()) << '\n';
  out << "cy " << format_real(cam.principal.y()) << '\n';
  out << 'R';
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out << ' ' << format_real(cam.rotation(r, c));
  out << "\nt";
  for (int k = 0; k < 3; ++k) out << ' ' << format_real(cam.translation(k));
  out << '\n';
}

Camera read_camera(std::istream& in) {
  Camera cam;
  std::string key;
  int seen = 0;
  while (in >> key) {
    if (key == "f") {
      in >> cam.focal;
    } else if (key == "cx") {
      in >> cam.principal.x();
    } else if (key == "cy") {
      in >> cam.principal.y();
    } else if (key == "R") {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) in >> cam.rotation(r, c);
    } else if (key == "t") {
      for (int k = 0; k < 3; ++k) in >> cam.translation(k);
    } else {
      throw ValidationError("unknown camera file key '" + key + "'");
    }
    if (!in) throw ValidationError("malformed camera file near '" + key + "'");
    ++seen;
  }
  if (seen != 5) throw ValidationError("camera file must contain f, cx, cy, R and t");
  validate(cam);
  return cam;
}

void write_trace(std::ostream& out, const std::vector<TraceEntry>& trace) {
  out << "iteration,f,loss\n";
  for (const auto& e : trace) out << e.iteration << ',' << format_real(e.focal) << ',' << format_real(e.loss) << '\n';
}

}  // namespace pitchblur
