#include "blockstab/render.hpp"

#include <cmath>

namespace blockstab {

RgbImage decomposition_map(const io::ReportFile& report, const Labeling& labels, int num_labels, int rows, int cols) {
  if (rows < 1 || cols < 1) throw ModelError("image dimensions must be positive");
  const auto n = static_cast<std::size_t>(rows) * cols;
  if (report.block.size() != n || labels.size() != n) throw ModelError("report size does not match rows x cols");
  RgbImage img{cols, rows, std::vector<std::array<double, 3>>(n)};
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::size_t u = static_cast<std::size_t>(r) * cols + c;
      auto& px = img.pixels[u];
      if (!report.stable[u]) {
        px = {255, 0, 0};
        continue;
      }
      bool seam = false;
      if (r > 0) seam |= report.block[u - cols] != report.block[u];
      if (r + 1 < rows) seam |= report.block[u + cols] != report.block[u];
      if (c > 0) seam |= report.block[u - 1] != report.block[u];
      if (c + 1 < cols) seam |= report.block[u + 1] != report.block[u];
      if (seam) {
        px = {0, 255, 0};
        continue;
      }
      const double gray = num_labels > 1 ? std::round(255.0 * labels[u] / (num_labels - 1)) : 0.0;
      px = {gray, gray, gray};
    }
  }
  return img;
}

}  // namespace blockstab
