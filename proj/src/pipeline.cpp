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

#include "bframe/pipeline.hpp"

#include "bframe/delaunay.hpp"
#include "bframe/edge_mask.hpp"
#include "bframe/graphcut.hpp"
#include "bframe/io.hpp"
#include "bframe/pruning.hpp"
#include "bframe/render.hpp"
#include "bframe/visibility.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace bframe {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string view_file(const std::string& folder, int k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03d.sfr", k);
  return folder + "/" + buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing_prerequisite", "cannot read " + path.string());
  return in;
}

// The manifest of `stage` in `dir`, named in the error when absent.
StageManifest require(const fs::path& dir, const std::string& stage) {
  const fs::path p = dir / manifest_name(stage);
  if (!fs::exists(p)) {
    throw Error("missing_prerequisite",
                "stage '" + stage + "' has not run: " + p.string() + " not found");
  }
  return load_manifest(p);
}

// Output of `m` whose path starts with `prefix`, in manifest order.
std::vector<std::string> outputs_under(const StageManifest& m, const std::string& prefix) {
  std::vector<std::string> out;
  for (const auto& o : m.outputs) {
    if (o.rfind(prefix, 0) == 0) out.push_back(o);
  }
  return out;
}

std::string output_named(const StageManifest& m, const std::string& name) {
  for (const auto& o : m.outputs) {
    if (o == name) return o;
  }
  throw Error("missing_prerequisite", "stage '" + m.stage + "' lists no " + name);
}

std::vector<ImageBuffer> load_rasters(const fs::path& dir, const std::vector<std::string>& rel) {
  std::vector<ImageBuffer> out;
  out.reserve(rel.size());
  for (const auto& r : rel) out.push_back(io::load_raster(dir / r));
  return out;
}

std::map<std::string, std::string> spec_entries(const SceneSpec& s) {
  std::ostringstream ss;
  write_scene_spec(ss, s);
  std::map<std::string, std::string> out;
  std::istringstream in(ss.str());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

// Runs body(manifest) with dir created, times it and saves the manifest.
StageManifest run_stage(const fs::path& dir, const std::string& stage,
                        std::map<std::string, std::string> parameters,
                        const std::function<void(StageManifest&)>& body) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error("io_error", "cannot create output directory " + dir.string());
  }
  StageManifest m;
  m.stage = stage;
  m.parameters = std::move(parameters);
  const auto t0 = Clock::now();
  try {
    body(m);
  } catch (const Error& e) {
    // A failed stage still leaves its manifest, with the error recorded and
    // no outputs claimed.
    m.outputs.clear();
    m.wall_time = seconds_since(t0);
    m.parameters["error"] = e.code() + ": " + e.what();
    save_manifest(dir / manifest_name(stage), m);
    throw Error(e.code(), stage + ": " + e.what());
  }
  m.wall_time = seconds_since(t0);
  save_manifest(dir / manifest_name(stage), m);
  return m;
}

}  // namespace

SceneSpec read_scene_spec(std::istream& in) {
  SceneSpec s;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error("invalid_spec", "spec line without '=': " + t);
    const auto key = trim(t.substr(0, eq));
    const auto value = trim(t.substr(eq + 1));
    try {
      std::size_t used = 0;
      auto num = [&] {
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      };
      auto whole = [&] {
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      };
      if (key == "width") s.building.width = num();
      else if (key == "depth") s.building.depth = num();
      else if (key == "wall_height") s.building.wall_height = num();
      else if (key == "ridge_height") s.building.ridge_height = num();
      else if (key == "roof") {
        if (value == "gable") s.building.roof = RoofType::kGable;
        else if (value == "flat") s.building.roof = RoofType::kFlat;
        else throw std::invalid_argument(value);
      } else if (key == "view_count") s.view_count = static_cast<int>(whole());
      else if (key == "resolution") s.resolution = static_cast<int>(whole());
      else if (key == "fov_degrees") s.fov_degrees = num();
      else if (key == "turns") s.turns = num();
      else if (key == "density") s.density = num();
      else if (key == "edge_bias") s.edge_bias = num();
      else if (key == "clutter_fraction") s.clutter_fraction = num();
      else if (key == "seed") s.seed = static_cast<std::uint64_t>(whole());
      else throw Error("invalid_spec", "unknown spec key '" + key + "'");
    } catch (const std::logic_error&) {
      throw Error("invalid_spec", "bad value for '" + key + "': " + value);
    }
  }
  validate_building(s.building);
  if (s.view_count < 2) throw Error("invalid_spec", "view_count must be >= 2");
  if (s.resolution < 3) throw Error("invalid_spec", "resolution must be >= 3");
  if (!(s.density > 0.0)) throw Error("invalid_spec", "density must be positive");
  if (s.edge_bias < 0.0 || s.clutter_fraction < 0.0) {
    throw Error("invalid_spec", "edge_bias and clutter_fraction must be >= 0");
  }
  return s;
}

SceneSpec load_scene_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("invalid_spec", "cannot read spec " + path.string());
  return read_scene_spec(in);
}

void write_scene_spec(std::ostream& out, const SceneSpec& s) {
  const auto& b = s.building;
  out << "width=" << io::format_double(b.width) << '\n'
      << "depth=" << io::format_double(b.depth) << '\n'
      << "wall_height=" << io::format_double(b.wall_height) << '\n'
      << "roof=" << (b.roof == RoofType::kGable ? "gable" : "flat") << '\n'
      << "ridge_height=" << io::format_double(b.ridge_height) << '\n'
      << "view_count=" << s.view_count << '\n'
      << "resolution=" << s.resolution << '\n'
      << "fov_degrees=" << io::format_double(s.fov_degrees) << '\n'
      << "turns=" << io::format_double(s.turns) << '\n'
      << "density=" << io::format_double(s.density) << '\n'
      << "edge_bias=" << io::format_double(s.edge_bias) << '\n'
      << "clutter_fraction=" << io::format_double(s.clutter_fraction) << '\n'
      << "seed=" << s.seed << '\n';
}

std::string manifest_name(const std::string& stage) {
  return stage == "gen" ? "scene.manifest" : stage + ".manifest";
}

void save_manifest(const fs::path& path, const StageManifest& m) {
  json j;
  j["stage"] = m.stage;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["wall_time"] = m.wall_time;
  j["parameters"] = m.parameters;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

StageManifest load_manifest(const fs::path& path) {
  auto in = open_in(path);
  try {
    const json j = json::parse(in);
    StageManifest m;
    m.stage = j.at("stage").get<std::string>();
    m.inputs = j.at("inputs").get<std::vector<std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.wall_time = j.at("wall_time").get<double>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw Error("parse_error", path.string() + ": " + e.what());
  }
}

StageManifest stage_gen(const SceneSpec& spec, const fs::path& dir) {
  return run_stage(dir, "gen", spec_entries(spec), [&](StageManifest& m) {
    BuildingSpec b = spec.building;
    b.seed = spec.seed;
    const TriangleMesh mesh = generate_building(b);
    TrajectorySpec traj = default_trajectory(b, spec.view_count, spec.resolution);
    traj.fov_degrees = spec.fov_degrees;
    traj.turns = spec.turns;
    const auto views = spiral_trajectory(traj, building_center(b));
    const auto sampled = sample_primitives(mesh, spec.density, spec.edge_bias,
                                           spec.clutter_fraction, spec.seed);
    io::save_obj(dir / "gt_mesh.obj", mesh);
    io::save_primitives(dir / "primitives.txt", sampled.primitives);
    io::save_cameras(dir / "cameras.txt", views);
    m.outputs = {"gt_mesh.obj", "primitives.txt", "cameras.txt"};
    fs::create_directories(dir / "depth");
    fs::create_directories(dir / "normal");
    for (std::size_t k = 0; k < views.size(); ++k) {
      const auto gt = render_ground_truth(mesh, views[k]);
      const auto d = view_file("depth", static_cast<int>(k));
      const auto n = view_file("normal", static_cast<int>(k));
      io::save_raster(dir / d, gt.depth);
      io::save_raster(dir / n, gt.normal);
      m.outputs.push_back(d);
      m.outputs.push_back(n);
    }
    m.parameters["surface_count"] = std::to_string(sampled.surface_count);
    m.parameters["edge_count"] = std::to_string(sampled.edge_count);
    m.parameters["clutter_count"] = std::to_string(sampled.clutter_count);
  });
}

StageManifest stage_masks(const fs::path& dir, const PipelineConfig& config) {
  validate_config(config);
  const auto scene = require(dir, "gen");
  return run_stage(dir, "masks", io::config_entries(config), [&](StageManifest& m) {
    m.inputs = {output_named(scene, "primitives.txt"), output_named(scene, "cameras.txt")};
    const auto primitives = io::load_primitives(dir / m.inputs[0]);
    const auto views = io::load_cameras(dir / m.inputs[1]);
    fs::create_directories(dir / "masks");
    fs::create_directories(dir / "render_depth");
    for (std::size_t k = 0; k < views.size(); ++k) {
      const auto maps = render_maps(primitives, views[k], config);
      const auto mask = mask_from_normals(maps.normal, views[k].view_id, config);
      const auto mk = view_file("masks", static_cast<int>(k));
      const auto dk = view_file("render_depth", static_cast<int>(k));
      io::save_raster(dir / mk, mask.mask);
      io::save_raster(dir / dk, maps.depth);
      m.outputs.push_back(mk);
      m.outputs.push_back(dk);
    }
  });
}

StageManifest stage_score(const fs::path& dir, const PipelineConfig& config) {
  validate_config(config);
  const auto scene = require(dir, "gen");
  const auto masks = require(dir, "masks");
  return run_stage(dir, "score", io::config_entries(config), [&](StageManifest& m) {
    m.inputs = {output_named(scene, "primitives.txt"), output_named(scene, "cameras.txt")};
    const auto mask_files = outputs_under(masks, "masks/");
    const auto depth_files = outputs_under(masks, "render_depth/");
    m.inputs.insert(m.inputs.end(), mask_files.begin(), mask_files.end());
    m.inputs.insert(m.inputs.end(), depth_files.begin(), depth_files.end());
    const auto primitives = io::load_primitives(dir / "primitives.txt");
    const auto views = io::load_cameras(dir / "cameras.txt");
    std::vector<EdgeMask> edge_masks;
    for (std::size_t k = 0; k < mask_files.size(); ++k) {
      EdgeMask e;
      e.view_id = k < views.size() ? views[k].view_id : static_cast<int>(k);
      e.mask = io::load_raster(dir / mask_files[k]);
      e.threshold_used = config.edge_threshold;
      edge_masks.push_back(std::move(e));
    }
    const auto depths = load_rasters(dir, depth_files);
    const auto table = score_all(primitives, views, edge_masks, depths, config);
    auto out = open_out(dir / "scores.txt");
    write_scores(out, table);
    m.outputs = {"scores.txt"};
  });
}

StageManifest stage_prune(const fs::path& dir, const PipelineConfig& config) {
  validate_config(config);
  const auto scene = require(dir, "gen");
  const auto score = require(dir, "score");
  return run_stage(dir, "prune", io::config_entries(config), [&](StageManifest& m) {
    m.inputs = {output_named(scene, "primitives.txt"), output_named(score, "scores.txt")};
    const auto primitives = io::load_primitives(dir / m.inputs[0]);
    EdgeScoreTable table;
    auto in = open_in(dir / m.inputs[1]);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      EdgeScore e;
      int hits = 0;
      if (!(ss >> e.id >> e.score >> hits >> table.view_count)) {
        throw Error("parse_error", "bad score line: " + line);
      }
      table.entries.push_back(std::move(e));
    }
    if (table.entries.size() != primitives.size()) {
      throw Error("count_mismatch", "scores.txt does not match primitives.txt");
    }
    const auto result = prune(primitives, table, config.prune_tau);
    io::save_primitives(dir / "kept.txt", result.kept);
    io::save_primitives(dir / "pruned.txt", result.pruned);
    m.outputs = {"kept.txt", "pruned.txt"};
    m.parameters["kept_count"] = std::to_string(result.kept.size());
    m.parameters["pruned_count"] = std::to_string(result.pruned.size());
  });
}

StageManifest stage_visibility(const fs::path& dir, const PipelineConfig& config) {
  validate_config(config);
  const auto scene = require(dir, "gen");
  const auto pruned = require(dir, "prune");
  return run_stage(dir, "visibility", io::config_entries(config), [&](StageManifest& m) {
    const auto depth_files = outputs_under(scene, "depth/");
    m.inputs = {output_named(pruned, "kept.txt"), output_named(scene, "cameras.txt")};
    m.inputs.insert(m.inputs.end(), depth_files.begin(), depth_files.end());
    const auto kept = io::load_primitives(dir / "kept.txt");
    const auto views = io::load_cameras(dir / "cameras.txt");
    const auto depths = load_rasters(dir, depth_files);
    std::vector<Vec3> points;
    points.reserve(kept.size());
    for (const auto& p : kept) points.push_back(p.center);
    const auto records = validate_visibility(points, views, depths, config);
    auto out = open_out(dir / "visibility.txt");
    write_visibility(out, records);
    m.outputs = {"visibility.txt"};
  });
}

StageManifest stage_mesh(const fs::path& dir, const PipelineConfig& config) {
  validate_config(config);
  const auto scene = require(dir, "gen");
  const auto pruned = require(dir, "prune");
  const auto vis = require(dir, "visibility");
  return run_stage(dir, "mesh", io::config_entries(config), [&](StageManifest& m) {
    m.inputs = {output_named(pruned, "kept.txt"), output_named(vis, "visibility.txt"),
                output_named(scene, "cameras.txt")};
    const auto kept = io::load_primitives(dir / "kept.txt");
    if (kept.size() < 4) {
      throw Error("insufficient_points", "insufficient points: " + std::to_string(kept.size()) +
                                             " kept primitives, at least 4 needed");
    }
    const auto views = io::load_cameras(dir / "cameras.txt");
    std::vector<Vec3> points;
    for (const auto& p : kept) points.push_back(p.center);
    auto in = open_in(dir / "visibility.txt");
    const auto records = read_visibility(in, static_cast<int>(points.size()));

    const TetMesh tets = tetrahedralize(points);
    RayStats stats;
    DualGraph graph = accumulate_ray_costs(tets, records, views, config, &stats);
    add_geometric_costs(graph, geometric_costs(tets), config.graphcut_beta);
    LabeledTetMesh labeled = solve_mincut(tets, graph);
    const int relabeled = make_manifold(labeled);
    const TriangleMesh surface = extract_surface(labeled);
    const TriangleMesh mesh = surface.triangles.empty()
                                  ? surface
                                  : postfilter_edges(surface, config.postfilter_edge_factor);
    io::save_obj(dir / "surface.obj", surface);
    io::save_obj(dir / "mesh.obj", mesh);
    m.outputs = {"surface.obj", "mesh.obj"};
    m.parameters["tetrahedra"] = std::to_string(tets.size());
    m.parameters["rays"] = std::to_string(stats.rays);
    m.parameters["relabeled_cells"] = std::to_string(relabeled);
    m.parameters["surface_faces"] = std::to_string(surface.triangles.size());
    m.parameters["faces"] = std::to_string(mesh.triangles.size());
  });
}

StageManifest stage_eval(const fs::path& dir, const PipelineConfig& config, const fs::path& rec,
                         const fs::path& gt, EvalReport* report) {
  validate_config(config);
  fs::path rec_path = rec, gt_path = gt;
  std::string rec_rel = rec.string(), gt_rel = gt.string();
  if (rec.empty()) {
    rec_rel = output_named(require(dir, "mesh"), "mesh.obj");
    rec_path = dir / rec_rel;
  }
  if (gt.empty()) {
    gt_rel = output_named(require(dir, "gen"), "gt_mesh.obj");
    gt_path = dir / gt_rel;
  }
  return run_stage(dir, "eval", io::config_entries(config), [&](StageManifest& m) {
    m.inputs = {rec_rel, gt_rel};
    const auto t0 = Clock::now();
    const TriangleMesh r = io::load_obj(rec_path);
    if (r.vertices.empty()) throw Error("empty_mesh", "reconstruction has no vertices");
    EvalReport e = rmse(r, io::load_obj(gt_path));
    e.wall_time = seconds_since(t0);
    if (report) {
      e.wall_time = report->wall_time > 0.0 ? report->wall_time : e.wall_time;
      *report = e;
    }
    auto out = open_out(dir / "eval.txt");
    write_eval_report(out, e);
    out.close();
    append_results_csv((dir / "results.csv").string(), dir.filename().string(), "bframe", e);
    m.outputs = {"eval.txt", "results.csv"};
  });
}

PipelineReport run_pipeline(const SceneSpec& spec, const fs::path& dir,
                            const PipelineConfig& config) {
  validate_config(config);
  PipelineReport report;
  const auto t0 = Clock::now();
  auto note = [&](const StageManifest& m) { report.stage_times.emplace_back(m.stage, m.wall_time); };
  note(stage_gen(spec, dir));
  note(stage_masks(dir, config));
  note(stage_score(dir, config));
  note(stage_prune(dir, config));
  note(stage_visibility(dir, config));
  note(stage_mesh(dir, config));
  // The reported time covers every stage up to the mesh, as a user would
  // wait for it; eval only measures.
  report.eval.wall_time = seconds_since(t0);
  note(stage_eval(dir, config, {}, {}, &report.eval));
  report.total_time = seconds_since(t0);
  return report;
}

}  // namespace bframe
