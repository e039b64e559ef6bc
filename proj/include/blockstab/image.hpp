#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockstab {

class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;  ///< row-major intensities

  double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
  double& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::array<double, 3>> pixels;

  const std::array<double, 3>& at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
};

/// Binary (P5) or ASCII (P2) PGM.
GrayImage read_pgm(const std::string& path);
/// Binary (P6) or ASCII (P3) PPM.
RgbImage read_ppm(const std::string& path);

/// ASCII writers; values are rounded and clamped to [0, 255].
void write_pgm(const std::string& path, const GrayImage& image);
void write_ppm(const std::string& path, const RgbImage& image);

}  // namespace blockstab
