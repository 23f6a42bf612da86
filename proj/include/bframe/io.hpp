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

// Text and binary file formats.
//
//  primitives  one primitive per line:
//              id cx cy cz s11 s12 s13 s22 s23 s33 alpha r g b nx ny nz
//              ('#' starts a comment line)
//  cameras     key-value blocks, each opened by `view_id N`, with keys
//              width, height, fx, fy, cx, cy, rotation (9, row-major),
//              translation (3)
//  rasters     "SFR1", u32 width, u32 height, u32 channels (little-endian),
//              then float32 samples row-major, channel-interleaved.
//              Depth rasters hold camera-space z; 0 marks "no surface".
//  meshes      ASCII OBJ, `v` and `f` records only (1-based indices)
//  config      flat `key=value`, keys are PipelineConfig field names;
//              loss_weights is a comma-separated triple.
//
// Doubles are written with 17 significant digits so text round-trips are
// bit-exact.

#pragma once

#include "bframe/scene.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace bframe::io {

namespace fs = std::filesystem;

void write_primitives(std::ostream& out, const std::vector<GaussianPrimitive>& ps);
std::vector<GaussianPrimitive> read_primitives(std::istream& in);
void save_primitives(const fs::path& path, const std::vector<GaussianPrimitive>& ps);
std::vector<GaussianPrimitive> load_primitives(const fs::path& path);

void write_cameras(std::ostream& out, const std::vector<CameraView>& views);
std::vector<CameraView> read_cameras(std::istream& in);
void save_cameras(const fs::path& path, const std::vector<CameraView>& views);
std::vector<CameraView> load_cameras(const fs::path& path);

void write_raster(std::ostream& out, const ImageBuffer& img);
ImageBuffer read_raster(std::istream& in);
void save_raster(const fs::path& path, const ImageBuffer& img);
ImageBuffer load_raster(const fs::path& path);
/// 8-bit binary PGM of channel 0, linearly mapped from [lo, hi].
void save_pgm(const fs::path& path, const ImageBuffer& img, double lo = 0.0,
              double hi = 1.0);

void write_obj(std::ostream& out, const TriangleMesh& mesh);
TriangleMesh read_obj(std::istream& in);
void save_obj(const fs::path& path, const TriangleMesh& mesh);
TriangleMesh load_obj(const fs::path& path);

/// Applies one `key=value` assignment; throws Error("invalid_config") for
/// unknown keys or unparseable values.
void set_config_value(PipelineConfig& config, const std::string& key,
                      const std::string& value);
std::map<std::string, std::string> config_entries(const PipelineConfig& config);
void write_config(std::ostream& out, const PipelineConfig& config);
PipelineConfig read_config(std::istream& in);
void save_config(const fs::path& path, const PipelineConfig& config);
PipelineConfig load_config(const fs::path& path);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace bframe::io
