#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advbound/errors.hpp"

namespace advbound {

/// A grayscale image with pixels in [0,1], row-major.
struct ImageGrid {
  std::int64_t height;
  std::int64_t width;
  std::vector<double> pixels;

  ImageGrid(std::int64_t h, std::int64_t w, std::vector<double> px);

  double at(std::int64_t r, std::int64_t c) const { return pixels[r * width + c]; }
  double& at(std::int64_t r, std::int64_t c) { return pixels[r * width + c]; }
};

// Replicates every pixel into a b x b block. Exact norm laws:
//   ||up(x)-up(y)||_2  = b * ||x-y||_2
//   ||up(x)-up(y)||_0  = b^2 * ||x-y||_0
//   ||up(x)-up(y)||_inf = ||x-y||_inf
ImageGrid upsample(const ImageGrid& img, std::int64_t b);

// Block mean over b x b tiles (dimensions must divide). Contraction:
// ||down(x)-down(y)||_2 <= (1/b) ||x-y||_2, and down(up(img,b),b) == img.
ImageGrid downsample(const ImageGrid& img, std::int64_t b);

// --- file formats ---

// Plain CSV grid: one row of comma-separated pixel values per image row.
ImageGrid read_image_csv(const std::string& path);
void write_image_csv(const std::string& path, const ImageGrid& img);

// Flat binary: 16-byte header (8-byte magic "ADVBIMG1", uint32 height,
// uint32 width, both little-endian), then height*width little-endian
// IEEE-754 doubles, row-major.
ImageGrid read_image_bin(const std::string& path);
void write_image_bin(const std::string& path, const ImageGrid& img);

}  // namespace advbound
