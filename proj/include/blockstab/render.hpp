#pragma once

#include "blockstab/image.hpp"
#include "blockstab/io.hpp"
#include "blockstab/model.hpp"

namespace blockstab {

/// Decomposition map of a rows x cols grid report. Uncertified pixels are
/// red; certified pixels with a 4-neighbor in another block are green; the
/// rest show their label as gray round(255 label / (k - 1)).
RgbImage decomposition_map(const io::ReportFile& report, const Labeling& labels, int num_labels, int rows, int cols);

}  // namespace blockstab
