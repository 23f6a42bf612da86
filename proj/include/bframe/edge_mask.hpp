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

#include "bframe/scene.hpp"

#include <span>
#include <vector>

namespace bframe {

struct EdgeMask {
  int view_id = 0;
  ImageBuffer mask;  // 1 channel, entries 0 or 1
  double threshold_used = 0.0;
};

/// Discrete energy sum |grad u|^2 + lambda sum |u - I|^2 over all channels,
/// with forward differences inside the image.
double smoothing_energy(const ImageBuffer& u, const ImageBuffer& image, double lambda);

/// Fixed-step gradient descent on smoothing_energy starting from the image
/// (step 0.2 / (4 + lambda), Neumann boundary). When `energies` is given it
/// receives the energy before the first and after every iteration.
/// Throws Error("invalid_argument") for lambda <= 0, iterations < 1 or
/// non-finite pixels.
ImageBuffer tv_denoise(const ImageBuffer& image, double lambda, int iterations,
                       std::vector<double>* energies = nullptr);

/// Unnormalized 3x3 Sobel per channel with mirrored borders (pixel -1 reads
/// pixel 1); the channel magnitudes are combined by their Euclidean norm.
/// Throws Error("invalid_argument") for images smaller than 3x3.
ImageBuffer gradient_magnitude(const ImageBuffer& image);

/// mask = 1 where magnitude > threshold (strict).
EdgeMask threshold_mask(const ImageBuffer& magnitude, double threshold, int view_id = 0);

/// Smoothing, gradient and threshold applied to one rendered normal map.
EdgeMask mask_from_normals(const ImageBuffer& normals, int view_id, const PipelineConfig& config);

/// Renders each view's normal map from the (frozen) primitives and runs
/// mask_from_normals on it.
std::vector<EdgeMask> extract_masks(std::span<const GaussianPrimitive> primitives,
                                    std::span<const CameraView> views,
                                    const PipelineConfig& config);

}  // namespace bframe
