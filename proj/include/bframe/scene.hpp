// Copyright 2026 The bframe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bframe {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

/// Library error. `code` is a short machine-readable tag (for the CLI error
/// line); `what()` carries the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Anisotropic 3D Gaussian. Covariance is stored as a full symmetric matrix.
struct GaussianPrimitive {
  std::int64_t id = 0;
  Vec3 center = Vec3::Zero();
  Mat3 covariance = Mat3::Identity();
  double opacity = 1.0;
  Vec3 color = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
};

/// Pinhole camera. `rotation`/`translation` map world to camera:
/// x_cam = R x + t. Pixel centers sit at integer coordinates, so the valid
/// image domain is [0, W-1] x [0, H-1].
struct CameraView {
  Mat3 intrinsics = Mat3::Identity();
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  int width = 0;
  int height = 0;
  int view_id = 0;

  double fx() const { return intrinsics(0, 0); }
  double fy() const { return intrinsics(1, 1); }
  double cx() const { return intrinsics(0, 2); }
  double cy() const { return intrinsics(1, 2); }

  Vec3 to_camera(const Vec3& x) const { return rotation * x + translation; }
  Vec3 center() const { return -rotation.transpose() * translation; }
  Mat34 projection_matrix() const;

  /// Pinhole projection of a camera-space point (z must be > 0).
  Vec2 project_camera(const Vec3& xc) const;
  /// World-space unit direction of the ray through pixel (u, v).
  Vec3 ray_direction(double u, double v) const;
  bool in_bounds(const Vec2& px) const {
    return px.x() >= 0.0 && px.y() >= 0.0 && px.x() <= width - 1 &&
           px.y() <= height - 1;
  }
};

/// Row-major, channel-interleaved float raster.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<float> data;

  ImageBuffer() = default;
  ImageBuffer(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {}

  std::size_t index(int x, int y, int c = 0) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  float& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }
  float at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }
  bool same_shape(const ImageBuffer& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
  bool operator==(const ImageBuffer& o) const = default;
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

/// Every free parameter of the pipeline. Field names double as config-file
/// keys and (with '_' -> '-') as CLI flags.
struct PipelineConfig {
  double tv_lambda = 16.0;
  int tv_iterations = 50;
  double edge_threshold = 0.5;
  std::array<double, 3> loss_weights = {0.8, 0.2, 0.05};
  double loss_epsilon = 1e-8;
  double ssim_mix = 0.8;
  double prune_tau = 0.1;
  int prune_passes = 1;
  double depth_eps_abs = 0.01;
  double depth_eps_rel = 0.01;
  double graphcut_beta = 1.0;
  double vis_sigma = 1.0;
  double vis_alpha = 1.0;
  double postfilter_edge_factor = 5.0;
  double splat_cutoff_sigmas = 3.0;
};

struct Violation {
  std::int64_t id = -1;  // primitive id or view id; -1 for list-level issues
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_primitive(const GaussianPrimitive& p);
ValidationReport validate_view(const CameraView& v);
ValidationReport validate_scene(const std::vector<GaussianPrimitive>& primitives,
                                const std::vector<CameraView>& views);
/// Throws Error("invalid_config") describing the first broken bound.
void validate_config(const PipelineConfig& config);
/// Throws Error("invalid_mesh") if an index is out of range, a triangle
/// repeats a vertex, or two triangles share an unordered vertex triple.
void validate_mesh(const TriangleMesh& mesh);

/// Builds a camera looking from `eye` at `target` with the world +Z axis as
/// up (image v grows downward).
CameraView look_at(const Vec3& eye, const Vec3& target, double focal,
                   int width, int height, int view_id);

}  // namespace bframe
