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

// Batch stages over a scene directory. `gen` writes the synthetic assets and
// scene.manifest; every later stage reads only files named by earlier
// manifests and writes <stage>.manifest next to its outputs:
//
//   gen         scene.manifest, gt_mesh.obj, primitives.txt, cameras.txt,
//               depth/NNN.sfr, normal/NNN.sfr
//   masks       masks/NNN.sfr, render_depth/NNN.sfr
//   score       scores.txt
//   prune       kept.txt, pruned.txt
//   visibility  visibility.txt
//   mesh        surface.obj (before the edge filter), mesh.obj
//   eval        eval.txt, results.csv
//
// Manifests are JSON objects with the stage name, relative input and output
// paths, wall time and the effective parameters.

#pragma once

#include "bframe/mesh_eval.hpp"
#include "bframe/scene.hpp"
#include "bframe/synthetic.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace bframe {

namespace fs = std::filesystem;

/// Everything `gen` needs to build a scene.
struct SceneSpec {
  BuildingSpec building;
  int view_count = 80;
  int resolution = 256;
  double fov_degrees = 40.0;
  double turns = 1.5;
  double density = 200.0;
  double edge_bias = 0.0;
  double clutter_fraction = 0.2;
  std::uint64_t seed = 1;
};

/// `key=value` lines ('#' comments). Keys: width, depth, wall_height, roof
/// (gable|flat), ridge_height, view_count, resolution, fov_degrees, turns,
/// density, edge_bias, clutter_fraction, seed. Throws Error("invalid_spec").
SceneSpec read_scene_spec(std::istream& in);
SceneSpec load_scene_spec(const fs::path& path);
void write_scene_spec(std::ostream& out, const SceneSpec& spec);

struct StageManifest {
  std::string stage;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double wall_time = 0.0;
  std::map<std::string, std::string> parameters;
};

void save_manifest(const fs::path& path, const StageManifest& manifest);
/// Throws Error("missing_prerequisite") when the file is absent and
/// Error("parse_error") when it is not a manifest.
StageManifest load_manifest(const fs::path& path);

/// Manifest file name of a stage ("scene.manifest" for gen).
std::string manifest_name(const std::string& stage);

StageManifest stage_gen(const SceneSpec& spec, const fs::path& dir);
StageManifest stage_masks(const fs::path& dir, const PipelineConfig& config);
StageManifest stage_score(const fs::path& dir, const PipelineConfig& config);
StageManifest stage_prune(const fs::path& dir, const PipelineConfig& config);
StageManifest stage_visibility(const fs::path& dir, const PipelineConfig& config);
/// Throws Error("insufficient_points") with fewer than 4 kept points.
StageManifest stage_mesh(const fs::path& dir, const PipelineConfig& config);
/// Evaluates `rec` (default dir/mesh.obj) against `gt` (default the scene's
/// GT mesh), writes eval.txt and appends a row to results.csv.
StageManifest stage_eval(const fs::path& dir, const PipelineConfig& config,
                         const fs::path& rec = {}, const fs::path& gt = {},
                         EvalReport* report = nullptr);

struct PipelineReport {
  EvalReport eval;
  /// Stage name and wall time, in execution order.
  std::vector<std::pair<std::string, double>> stage_times;
  double total_time = 0.0;
};

/// gen, masks, score, prune, visibility, mesh, eval in order.
PipelineReport run_pipeline(const SceneSpec& spec, const fs::path& dir,
                            const PipelineConfig& config);

}  // namespace bframe
