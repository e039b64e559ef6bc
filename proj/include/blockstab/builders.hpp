#pragma once

#include <cstdint>
#include <vector>

#include "blockstab/dual_decomp.hpp"
#include "blockstab/duals.hpp"
#include "blockstab/image.hpp"
#include "blockstab/model.hpp"

namespace blockstab {

struct GoldenInstance {
  PottsInstance instance;
  Labeling optimum;
};

/// Triangle with unit weights and costs u:(inf,0,e), v:(0,inf,e), w:(e,0,inf).
/// Requires 0 < epsilon < 1/3. The optimum is (1, 0, 1).
GoldenInstance counterexample_triangle(double epsilon);

struct CombinedExample {
  PottsInstance instance;  ///< nodes u, v, w, x, y, z = 0..5
  Labeling optimum;        ///< (0, 0, 0, 1, 1, 1)
  BlockDecomposition blocks;  ///< S = {u, v, w}, T = {x, y, z}, empty S_*
  BlockDualSolution delta;    ///< optimal block dual on u-x and w-y
};

/// Six-node instance with a stable block S and a tree block T. Defaults in
/// the CLI are epsilon = 0.01, gamma = 0.1.
CombinedExample combined_example(double epsilon, double gamma);

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

struct RandomSpec {
  int num_labels = 3;
  Range costs{0.0, 5.0};
  Range weights{0.5, 2.0};
  bool integer = false;  ///< draw integers in [lo, hi] instead of reals
  std::uint64_t seed = 0;
};

/// 4-connected rows x cols grid; node id = row * cols + col.
PottsInstance random_grid(int rows, int cols, const RandomSpec& spec);

/// Random tree: node i > 0 attaches to a uniformly chosen earlier node.
PottsInstance random_tree(int num_nodes, const RandomSpec& spec);

struct StereoParams {
  int num_labels = 8;
  double s = 50.0;
  double P = 2.0;
  double T = 4.0;
  bool birchfield_tomasi = true;
};

/// Disparity MRF: theta_u(i) = dissimilarity(I_L(u), I_R(u - i))^2, shifts
/// leaving the image are forbidden; weights P s if |I_L(u) - I_L(v)| < T, else s.
PottsInstance build_stereo(const GrayImage& left, const GrayImage& right, const StereoParams& params = {});

/// Sampling-insensitive dissimilarity between left column cl and right
/// column cr of one row (half-pixel linear interpolation, both directions).
double birchfield_tomasi(const GrayImage& left, const GrayImage& right, int row, int cl, int cr);

struct SegmentationParams {
  double lambda1 = 5.0;
  double lambda2 = 100.0;
  double sigma = 5.0;
};

/// w(u, v) = lambda1 + lambda2 exp(-g^2 / (2 sigma^2)) / dist(u, v) with g the
/// Euclidean RGB difference and dist = 1 on the 4-connected grid.
PottsInstance build_segmentation(const RgbImage& image, const std::vector<std::vector<double>>& node_costs,
                                 const SegmentationParams& params = {});

double segmentation_weight(double rgb_difference, double distance, const SegmentationParams& params = {});

struct StereoPair {
  GrayImage left;
  GrayImage right;
  std::vector<int> disparity;  ///< ground truth per pixel
};

/// Textured synthetic pair: a background plane and rectangular foreground
/// patches at larger disparities, all below num_labels.
StereoPair synthetic_stereo_pair(int rows, int cols, int num_labels, std::uint64_t seed);

}  // namespace blockstab
