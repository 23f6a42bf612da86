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

#include "bframe/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>

namespace bframe::io {

namespace {

std::ifstream open_in(const fs::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error("io", "cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const fs::path& path, bool binary = false) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc
                                 : std::ios::out | std::ios::trunc);
  if (!out) throw Error("io", "cannot open " + path.string() + " for writing");
  return out;
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    throw Error("parse", std::string("bad number for ") + what + ": '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const char* what) {
  long long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    throw Error("parse", std::string("bad integer for ") + what + ": '" + s + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

template <typename T>
void put_le(std::ostream& out, T v) {
  static_assert(std::endian::native == std::endian::little,
                "raster I/O assumes a little-endian host");
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("parse", "truncated raster");
  return v;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

// ---- primitives ------------------------------------------------------------

void write_primitives(std::ostream& out, const std::vector<GaussianPrimitive>& ps) {
  out << "# id cx cy cz s11 s12 s13 s22 s23 s33 alpha r g b nx ny nz\n";
  for (const auto& p : ps) {
    const Mat3& s = p.covariance;
    const double vals[] = {p.center.x(), p.center.y(), p.center.z(),
                           s(0, 0),      s(0, 1),      s(0, 2),
                           s(1, 1),      s(1, 2),      s(2, 2),
                           p.opacity,    p.color.x(),  p.color.y(),
                           p.color.z(),  p.normal.x(), p.normal.y(),
                           p.normal.z()};
    out << p.id;
    for (double v : vals) out << ' ' << format_double(v);
    out << '\n';
  }
}

std::vector<GaussianPrimitive> read_primitives(std::istream& in) {
  std::vector<GaussianPrimitive> ps;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto tok = split_ws(t);
    if (tok.size() != 17) {
      throw Error("parse", "primitive line " + std::to_string(lineno) +
                               ": expected 17 fields");
    }
    double v[16];
    for (int i = 0; i < 16; ++i) v[i] = parse_double(tok[i + 1], "primitive");
    GaussianPrimitive p;
    p.id = parse_int(tok[0], "primitive id");
    p.center = {v[0], v[1], v[2]};
    p.covariance << v[3], v[4], v[5], v[4], v[6], v[7], v[5], v[7], v[8];
    p.opacity = v[9];
    p.color = {v[10], v[11], v[12]};
    p.normal = {v[13], v[14], v[15]};
    ps.push_back(p);
  }
  return ps;
}

void save_primitives(const fs::path& path, const std::vector<GaussianPrimitive>& ps) {
  auto out = open_out(path);
  write_primitives(out, ps);
}

std::vector<GaussianPrimitive> load_primitives(const fs::path& path) {
  auto in = open_in(path);
  return read_primitives(in);
}

// ---- cameras ---------------------------------------------------------------

void write_cameras(std::ostream& out, const std::vector<CameraView>& views) {
  for (const auto& v : views) {
    out << "view_id " << v.view_id << '\n'
        << "width " << v.width << '\n'
        << "height " << v.height << '\n'
        << "fx " << format_double(v.fx()) << '\n'
        << "fy " << format_double(v.fy()) << '\n'
        << "cx " << format_double(v.cx()) << '\n'
        << "cy " << format_double(v.cy()) << '\n'
        << "rotation";
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out << ' ' << format_double(v.rotation(r, c));
    out << "\ntranslation";
    for (int i = 0; i < 3; ++i) out << ' ' << format_double(v.translation[i]);
    out << "\n\n";
  }
}

std::vector<CameraView> read_cameras(std::istream& in) {
  std::vector<CameraView> views;
  std::string line;
  CameraView* cur = nullptr;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto tok = split_ws(t);
    const std::string& key = tok[0];
    auto expect = [&](std::size_t n) {
      if (tok.size() != n + 1) {
        throw Error("parse", "camera key '" + key + "' expects " +
                                 std::to_string(n) + " values");
      }
      if (!cur && key != "view_id") {
        throw Error("parse", "camera key '" + key + "' before view_id");
      }
    };
    if (key == "view_id") {
      expect(1);
      views.emplace_back();
      cur = &views.back();
      cur->view_id = static_cast<int>(parse_int(tok[1], "view_id"));
    } else if (key == "width") {
      expect(1);
      cur->width = static_cast<int>(parse_int(tok[1], "width"));
    } else if (key == "height") {
      expect(1);
      cur->height = static_cast<int>(parse_int(tok[1], "height"));
    } else if (key == "fx") {
      expect(1);
      cur->intrinsics(0, 0) = parse_double(tok[1], "fx");
    } else if (key == "fy") {
      expect(1);
      cur->intrinsics(1, 1) = parse_double(tok[1], "fy");
    } else if (key == "cx") {
      expect(1);
      cur->intrinsics(0, 2) = parse_double(tok[1], "cx");
    } else if (key == "cy") {
      expect(1);
      cur->intrinsics(1, 2) = parse_double(tok[1], "cy");
    } else if (key == "rotation") {
      expect(9);
      for (int i = 0; i < 9; ++i)
        cur->rotation(i / 3, i % 3) = parse_double(tok[i + 1], "rotation");
    } else if (key == "translation") {
      expect(3);
      for (int i = 0; i < 3; ++i)
        cur->translation[i] = parse_double(tok[i + 1], "translation");
    } else {
      throw Error("parse", "unknown camera key '" + key + "'");
    }
  }
  return views;
}

void save_cameras(const fs::path& path, const std::vector<CameraView>& views) {
  auto out = open_out(path);
  write_cameras(out, views);
}

std::vector<CameraView> load_cameras(const fs::path& path) {
  auto in = open_in(path);
  return read_cameras(in);
}

// ---- rasters ---------------------------------------------------------------

void write_raster(std::ostream& out, const ImageBuffer& img) {
  out.write("SFR1", 4);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(img.width));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(img.height));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(img.channels));
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size() * sizeof(float)));
}

ImageBuffer read_raster(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SFR1", 4) != 0) {
    throw Error("parse", "raster: bad magic");
  }
  const auto w = get_le<std::uint32_t>(in);
  const auto h = get_le<std::uint32_t>(in);
  const auto c = get_le<std::uint32_t>(in);
  if (c < 1 || c > 3) throw Error("parse", "raster: channels must be 1..3");
  if (static_cast<std::uint64_t>(w) * h > (1ull << 30)) {
    throw Error("parse", "raster: implausible size");
  }
  ImageBuffer img(static_cast<int>(w), static_cast<int>(h), static_cast<int>(c));
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size() * sizeof(float)));
  if (!in) throw Error("parse", "raster: truncated data");
  return img;
}

void save_raster(const fs::path& path, const ImageBuffer& img) {
  auto out = open_out(path, true);
  write_raster(out, img);
}

ImageBuffer load_raster(const fs::path& path) {
  auto in = open_in(path, true);
  return read_raster(in);
}

void save_pgm(const fs::path& path, const ImageBuffer& img, double lo, double hi) {
  auto out = open_out(path, true);
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double v = std::clamp((img.at(x, y) - lo) * scale, 0.0, 255.0);
      out.put(static_cast<char>(static_cast<unsigned char>(v + 0.5)));
    }
  }
}

// ---- meshes ----------------------------------------------------------------

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  for (const auto& v : mesh.vertices) {
    out << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' '
        << format_double(v.z()) << '\n';
  }
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

TriangleMesh read_obj(std::istream& in) {
  TriangleMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto tok = split_ws(t);
    if (tok[0] == "v") {
      if (tok.size() < 4) throw Error("parse", "obj: short vertex record");
      mesh.vertices.emplace_back(parse_double(tok[1], "v"),
                                 parse_double(tok[2], "v"),
                                 parse_double(tok[3], "v"));
    } else if (tok[0] == "f") {
      if (tok.size() < 4) throw Error("parse", "obj: short face record");
      std::vector<int> idx;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        // Accept "i", "i/t", "i/t/n"; only the position index is used.
        const auto slash = tok[i].find('/');
        long long k = parse_int(tok[i].substr(0, slash), "f");
        if (k < 0) k = static_cast<long long>(mesh.vertices.size()) + k + 1;
        idx.push_back(static_cast<int>(k - 1));
      }
      for (std::size_t i = 1; i + 1 < idx.size(); ++i) {
        mesh.triangles.push_back({idx[0], idx[i], idx[i + 1]});
      }
    }
    // Other record types are outside the supported subset and ignored.
  }
  validate_mesh(mesh);
  return mesh;
}

void save_obj(const fs::path& path, const TriangleMesh& mesh) {
  auto out = open_out(path);
  write_obj(out, mesh);
}

TriangleMesh load_obj(const fs::path& path) {
  auto in = open_in(path);
  return read_obj(in);
}

// ---- config ----------------------------------------------------------------

namespace {

struct ConfigField {
  const char* name;
  std::function<void(PipelineConfig&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename T>
ConfigField scalar_field(const char* name, T PipelineConfig::*member) {
  return {name,
          [name, member](PipelineConfig& c, const std::string& v) {
            if constexpr (std::is_integral_v<T>) {
              c.*member = static_cast<T>(parse_int(v, name));
            } else {
              c.*member = parse_double(v, name);
            }
          },
          [member](const PipelineConfig& c) {
            if constexpr (std::is_integral_v<T>) {
              return std::to_string(c.*member);
            } else {
              return format_double(c.*member);
            }
          }};
}

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = {
      scalar_field("tv_lambda", &PipelineConfig::tv_lambda),
      scalar_field("tv_iterations", &PipelineConfig::tv_iterations),
      scalar_field("edge_threshold", &PipelineConfig::edge_threshold),
      {"loss_weights",
       [](PipelineConfig& c, const std::string& v) {
         std::array<double, 3> w{};
         std::istringstream ss(v);
         std::string part;
         int n = 0;
         while (std::getline(ss, part, ',')) {
           if (n >= 3) throw Error("invalid_config", "loss_weights takes 3 values");
           w[n++] = parse_double(trim(part), "loss_weights");
         }
         if (n != 3) throw Error("invalid_config", "loss_weights takes 3 values");
         c.loss_weights = w;
       },
       [](const PipelineConfig& c) {
         return format_double(c.loss_weights[0]) + "," +
                format_double(c.loss_weights[1]) + "," +
                format_double(c.loss_weights[2]);
       }},
      scalar_field("loss_epsilon", &PipelineConfig::loss_epsilon),
      scalar_field("ssim_mix", &PipelineConfig::ssim_mix),
      scalar_field("prune_tau", &PipelineConfig::prune_tau),
      scalar_field("prune_passes", &PipelineConfig::prune_passes),
      scalar_field("depth_eps_abs", &PipelineConfig::depth_eps_abs),
      scalar_field("depth_eps_rel", &PipelineConfig::depth_eps_rel),
      scalar_field("graphcut_beta", &PipelineConfig::graphcut_beta),
      scalar_field("vis_sigma", &PipelineConfig::vis_sigma),
      scalar_field("vis_alpha", &PipelineConfig::vis_alpha),
      scalar_field("postfilter_edge_factor", &PipelineConfig::postfilter_edge_factor),
      scalar_field("splat_cutoff_sigmas", &PipelineConfig::splat_cutoff_sigmas),
  };
  return fields;
}

}  // namespace

void set_config_value(PipelineConfig& config, const std::string& key,
                      const std::string& value) {
  for (const auto& f : config_fields()) {
    if (key == f.name) {
      try {
        f.set(config, trim(value));
      } catch (const Error& e) {
        throw Error("invalid_config", e.what());
      }
      return;
    }
  }
  throw Error("invalid_config", "unknown config key '" + key + "'");
}

std::map<std::string, std::string> config_entries(const PipelineConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& f : config_fields()) out[f.name] = f.get(config);
  return out;
}

void write_config(std::ostream& out, const PipelineConfig& config) {
  for (const auto& f : config_fields()) out << f.name << '=' << f.get(config) << '\n';
}

PipelineConfig read_config(std::istream& in) {
  PipelineConfig c;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error("invalid_config", "config line without '=': " + t);
    }
    set_config_value(c, trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  validate_config(c);
  return c;
}

void save_config(const fs::path& path, const PipelineConfig& config) {
  auto out = open_out(path);
  write_config(out, config);
}

PipelineConfig load_config(const fs::path& path) {
  auto in = open_in(path);
  return read_config(in);
}

}  // namespace bframe::io
