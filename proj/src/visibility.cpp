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

#include "bframe/visibility.hpp"

#include "bframe/io.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace bframe {

std::optional<double> sample_depth_bilinear(const ImageBuffer& depth, const Vec2& pixel) {
  if (!(pixel.x() >= 0.0 && pixel.y() >= 0.0 && pixel.x() <= depth.width - 1 &&
        pixel.y() <= depth.height - 1)) {
    throw Error("out_of_bounds", "depth sample outside the image");
  }
  const int x0 = static_cast<int>(std::floor(pixel.x()));
  const int y0 = static_cast<int>(std::floor(pixel.y()));
  const double fx = pixel.x() - x0, fy = pixel.y() - y0;
  const int x1 = std::min(x0 + 1, depth.width - 1);
  const int y1 = std::min(y0 + 1, depth.height - 1);
  const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  const int xs[4] = {x0, x1, x0, x1};
  const int ys[4] = {y0, y0, y1, y1};
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (w[k] == 0.0) continue;
    const double d = depth.at(xs[k], ys[k]);
    if (d == 0.0) return std::nullopt;
    acc += w[k] * d;
  }
  return acc;
}

double expected_depth(const Vec3& x, const CameraView& view) {
  const double z = view.to_camera(x).z();
  if (!(z > 0.0)) throw Error("behind_camera", "point is not in front of the camera");
  return z;
}

std::optional<ViewObservation> check_visibility(const Vec3& x, const CameraView& view,
                                                const ImageBuffer& depth,
                                                double eps_abs, double eps_rel) {
  const Vec3 xc = view.to_camera(x);
  if (!(xc.z() > 0.0)) return std::nullopt;
  const Vec2 px = view.project_camera(xc);
  if (!view.in_bounds(px)) return std::nullopt;
  const auto d_img = sample_depth_bilinear(depth, px);
  if (!d_img) return std::nullopt;
  if (!depth_consistent(xc.z(), *d_img, eps_abs, eps_rel)) return std::nullopt;
  return ViewObservation{view.view_id, px, xc.z(), *d_img};
}

std::vector<VisibilityRecord> validate_visibility(std::span<const Vec3> points,
                                                  std::span<const CameraView> views,
                                                  std::span<const ImageBuffer> depths,
                                                  const PipelineConfig& config) {
  if (views.size() != depths.size()) {
    throw Error("count_mismatch", "one depth map per view is required");
  }
  for (std::size_t j = 0; j < views.size(); ++j) {
    if (depths[j].width != views[j].width || depths[j].height != views[j].height ||
        depths[j].channels != 1) {
      throw Error("count_mismatch", "depth map does not match its view");
    }
  }
  std::vector<VisibilityRecord> records(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    records[i].point_id = static_cast<int>(i);
    for (std::size_t j = 0; j < views.size(); ++j) {
      if (auto obs = check_visibility(points[i], views[j], depths[j],
                                      config.depth_eps_abs, config.depth_eps_rel)) {
        records[i].visible_views.push_back(*obs);
      }
    }
  }
  return records;
}

void write_visibility(std::ostream& out, const std::vector<VisibilityRecord>& records) {
  out << "# point_id view_id px py d_exp d_img\n";
  for (const auto& r : records) {
    for (const auto& o : r.visible_views) {
      out << r.point_id << ' ' << o.view_id << ' ' << io::format_double(o.pixel.x())
          << ' ' << io::format_double(o.pixel.y()) << ' ' << io::format_double(o.d_exp)
          << ' ' << io::format_double(o.d_img) << '\n';
    }
  }
}

std::vector<VisibilityRecord> read_visibility(std::istream& in, int point_count) {
  std::vector<VisibilityRecord> records(point_count);
  for (int i = 0; i < point_count; ++i) records[i].point_id = i;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int pid = 0;
    ViewObservation o;
    if (!(ss >> pid >> o.view_id >> o.pixel.x() >> o.pixel.y() >> o.d_exp >> o.d_img)) {
      throw Error("parse", "bad visibility record: " + line);
    }
    if (pid < 0 || pid >= point_count) {
      throw Error("parse", "visibility record references unknown point");
    }
    records[pid].visible_views.push_back(o);
  }
  return records;
}

}  // namespace bframe
