#include "advbound/rescale.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace advbound {
namespace {

constexpr char kMagic[8] = {'A', 'D', 'V', 'B', 'I', 'M', 'G', '1'};

void check_pixel(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("pixel value outside [0,1]");
}

void put_u32_le(std::ostream& os, std::uint32_t v) {
  std::array<unsigned char, 4> b{static_cast<unsigned char>(v),
                                 static_cast<unsigned char>(v >> 8),
                                 static_cast<unsigned char>(v >> 16),
                                 static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t get_u32_le(std::istream& is) {
  std::array<unsigned char, 4> b{};
  is.read(reinterpret_cast<char*>(b.data()), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64_le(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  std::array<unsigned char, 8> b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b.data()), 8);
}

double get_f64_le(std::istream& is) {
  std::array<unsigned char, 8> b{};
  is.read(reinterpret_cast<char*>(b.data()), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[static_cast<std::size_t>(i)]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

ImageGrid::ImageGrid(std::int64_t h, std::int64_t w, std::vector<double> px)
    : height(h), width(w), pixels(std::move(px)) {
  if (height < 1 || width < 1) throw DomainError("image dimensions must be positive");
  if (static_cast<std::int64_t>(pixels.size()) != height * width)
    throw DomainError("pixel count does not match height*width");
  for (double v : pixels) check_pixel(v);
}

ImageGrid upsample(const ImageGrid& img, std::int64_t b) {
  if (b < 1) throw DomainError("expansion factor b must be >= 1");
  if (b == 1) return img;
  std::vector<double> out(static_cast<std::size_t>(img.height * b * img.width * b));
  std::int64_t ow = img.width * b;
  for (std::int64_t r = 0; r < img.height; ++r)
    for (std::int64_t c = 0; c < img.width; ++c) {
      double v = img.at(r, c);
      for (std::int64_t dr = 0; dr < b; ++dr)
        for (std::int64_t dc = 0; dc < b; ++dc)
          out[static_cast<std::size_t>((r * b + dr) * ow + (c * b + dc))] = v;
    }
  return ImageGrid(img.height * b, img.width * b, std::move(out));
}

ImageGrid downsample(const ImageGrid& img, std::int64_t b) {
  if (b < 1) throw DomainError("expansion factor b must be >= 1");
  if (img.height % b != 0 || img.width % b != 0)
    throw DomainError("image dimensions must be divisible by b");
  if (b == 1) return img;
  std::int64_t oh = img.height / b, ow = img.width / b;
  std::vector<double> out(static_cast<std::size_t>(oh * ow));
  double inv = 1.0 / static_cast<double>(b * b);
  for (std::int64_t r = 0; r < oh; ++r)
    for (std::int64_t c = 0; c < ow; ++c) {
      double first = img.at(r * b, c * b);
      double sum = 0.0;
      bool constant = true;
      for (std::int64_t dr = 0; dr < b; ++dr)
        for (std::int64_t dc = 0; dc < b; ++dc) {
          double v = img.at(r * b + dr, c * b + dc);
          constant = constant && v == first;
          sum += v;
        }
      // a constant block averages to its value exactly, whatever b is
      out[static_cast<std::size_t>(r * ow + c)] = constant ? first : sum * inv;
    }
  return ImageGrid(oh, ow, std::move(out));
}

ImageGrid read_image_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open image file: " + path);
  std::vector<double> pixels;
  std::int64_t width = -1, height = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::int64_t row_width = 0;
    while (std::getline(ss, cell, ',')) {
      pixels.push_back(std::stod(cell));
      ++row_width;
    }
    if (width < 0)
      width = row_width;
    else if (row_width != width)
      throw DomainError("ragged CSV image row in " + path);
    ++height;
  }
  if (height == 0) throw DomainError("empty CSV image: " + path);
  return ImageGrid(height, width, std::move(pixels));
}

void write_image_csv(const std::string& path, const ImageGrid& img) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write image file: " + path);
  char buf[32];
  for (std::int64_t r = 0; r < img.height; ++r) {
    for (std::int64_t c = 0; c < img.width; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", img.at(r, c));
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

ImageGrid read_image_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open image file: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw DomainError("bad image magic in " + path);
  std::uint32_t h = get_u32_le(in), w = get_u32_le(in);
  std::vector<double> pixels(static_cast<std::size_t>(h) * w);
  for (auto& v : pixels) v = get_f64_le(in);
  if (!in) throw DomainError("truncated image file: " + path);
  return ImageGrid(h, w, std::move(pixels));
}

void write_image_bin(const std::string& path, const ImageGrid& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write image file: " + path);
  out.write(kMagic, 8);
  put_u32_le(out, static_cast<std::uint32_t>(img.height));
  put_u32_le(out, static_cast<std::uint32_t>(img.width));
  for (double v : img.pixels) put_f64_le(out, v);
}

}  // namespace advbound
