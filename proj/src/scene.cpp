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

#include "bframe/scene.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

namespace bframe {

Mat34 CameraView::projection_matrix() const {
  Mat34 rt;
  rt.leftCols<3>() = rotation;
  rt.col(3) = translation;
  return intrinsics * rt;
}

Vec2 CameraView::project_camera(const Vec3& xc) const {
  const Vec3 h = intrinsics * xc;
  return {h.x() / h.z(), h.y() / h.z()};
}

Vec3 CameraView::ray_direction(double u, double v) const {
  const Vec3 d = intrinsics.triangularView<Eigen::Upper>().solve(Vec3(u, v, 1.0));
  return (rotation.transpose() * d).normalized();
}

namespace {

void add(ValidationReport& r, std::int64_t id, std::string field,
         std::string msg) {
  r.violations.push_back({id, std::move(field), std::move(msg)});
}

bool finite(const auto& m) { return m.allFinite(); }

}  // namespace

ValidationReport validate_primitive(const GaussianPrimitive& p) {
  ValidationReport r;
  const auto id = p.id;
  if (!finite(p.center)) add(r, id, "center", "non-finite center");
  if (!finite(p.covariance)) {
    add(r, id, "covariance", "non-finite covariance");
  } else {
    if ((p.covariance - p.covariance.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, p.covariance.cwiseAbs().maxCoeff())) {
      add(r, id, "covariance", "covariance not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(p.covariance,
                                           Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0) {
      add(r, id, "covariance", "covariance not positive-definite");
    }
  }
  if (!(p.opacity >= 0.0 && p.opacity <= 1.0)) {
    add(r, id, "opacity", "opacity outside [0,1]");
  }
  for (int c = 0; c < 3; ++c) {
    if (!(p.color[c] >= 0.0 && p.color[c] <= 1.0)) {
      add(r, id, "color", "color component outside [0,1]");
      break;
    }
  }
  if (!finite(p.normal) || std::abs(p.normal.norm() - 1.0) > 1e-6) {
    add(r, id, "normal", "normal is not unit length");
  }
  return r;
}

ValidationReport validate_view(const CameraView& v) {
  ValidationReport r;
  const auto id = v.view_id;
  if (v.width <= 0 || v.height <= 0) add(r, id, "size", "non-positive size");
  if (!finite(v.rotation) || !finite(v.translation) || !finite(v.intrinsics)) {
    add(r, id, "pose", "non-finite camera parameters");
    return r;
  }
  const Mat3 rtr = v.rotation.transpose() * v.rotation;
  if ((rtr - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    add(r, id, "rotation", "rotation not orthonormal");
  } else if (std::abs(v.rotation.determinant() - 1.0) > 1e-9) {
    add(r, id, "rotation", "not a proper rotation");
  }
  const Mat3& k = v.intrinsics;
  if (k(1, 0) != 0.0 || k(2, 0) != 0.0 || k(2, 1) != 0.0) {
    add(r, id, "intrinsics", "intrinsics lower triangle not zero");
  }
  if (!(k(0, 0) > 0.0 && k(1, 1) > 0.0)) {
    add(r, id, "intrinsics", "focal lengths must be positive");
  }
  if (k(2, 2) != 1.0) add(r, id, "intrinsics", "intrinsics(2,2) must be 1");
  Eigen::FullPivLU<Mat34> lu(v.projection_matrix());
  if (lu.rank() != 3) add(r, id, "projection", "projection rank below 3");
  return r;
}

ValidationReport validate_scene(const std::vector<GaussianPrimitive>& primitives,
                                const std::vector<CameraView>& views) {
  ValidationReport r;
  if (primitives.empty()) add(r, -1, "primitives", "empty primitive list");
  if (views.empty()) add(r, -1, "views", "empty view list");
  std::set<std::int64_t> ids;
  for (const auto& p : primitives) {
    if (!ids.insert(p.id).second) add(r, p.id, "id", "duplicate primitive id");
    auto pr = validate_primitive(p);
    r.violations.insert(r.violations.end(), pr.violations.begin(),
                        pr.violations.end());
  }
  for (const auto& v : views) {
    auto vr = validate_view(v);
    r.violations.insert(r.violations.end(), vr.violations.begin(),
                        vr.violations.end());
  }
  return r;
}

void validate_config(const PipelineConfig& c) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw Error("invalid_config", what);
  };
  need(c.tv_lambda > 0, "tv_lambda must be > 0");
  need(c.tv_iterations >= 1, "tv_iterations must be >= 1");
  need(c.edge_threshold > 0, "edge_threshold must be > 0");
  for (double w : c.loss_weights) need(w >= 0, "loss_weights must be >= 0");
  need(c.loss_epsilon > 0, "loss_epsilon must be > 0");
  need(c.ssim_mix >= 0 && c.ssim_mix <= 1, "ssim_mix must lie in [0,1]");
  need(c.prune_tau >= 0 && c.prune_tau <= 1, "prune_tau must lie in [0,1]");
  need(c.prune_passes >= 1, "prune_passes must be >= 1");
  need(c.depth_eps_abs > 0, "depth_eps_abs must be > 0");
  need(c.depth_eps_rel > 0, "depth_eps_rel must be > 0");
  need(c.graphcut_beta > 0, "graphcut_beta must be > 0");
  need(c.vis_sigma > 0, "vis_sigma must be > 0");
  need(c.vis_alpha > 0, "vis_alpha must be > 0");
  need(c.postfilter_edge_factor > 0, "postfilter_edge_factor must be > 0");
  need(c.splat_cutoff_sigmas > 0, "splat_cutoff_sigmas must be > 0");
}

void validate_mesh(const TriangleMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::set<std::array<int, 3>> seen;
  for (const auto& t : mesh.triangles) {
    for (int i : t) {
      if (i < 0 || i >= n) throw Error("invalid_mesh", "triangle index out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw Error("invalid_mesh", "triangle repeats a vertex");
    }
    auto key = t;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) {
      throw Error("invalid_mesh", "duplicate triangle");
    }
  }
}

CameraView look_at(const Vec3& eye, const Vec3& target, double focal,
                   int width, int height, int view_id) {
  const Vec3 forward = (target - eye).normalized();
  Vec3 right = forward.cross(Vec3::UnitZ());
  if (right.norm() < 1e-12) right = Vec3::UnitX();
  right.normalize();
  const Vec3 down = forward.cross(right);
  CameraView v;
  v.rotation.row(0) = right.transpose();
  v.rotation.row(1) = down.transpose();
  v.rotation.row(2) = forward.transpose();
  v.translation = -v.rotation * eye;
  v.intrinsics << focal, 0.0, (width - 1) / 2.0,  //
      0.0, focal, (height - 1) / 2.0,             //
      0.0, 0.0, 1.0;
  v.width = width;
  v.height = height;
  v.view_id = view_id;
  return v;
}

}  // namespace bframe
