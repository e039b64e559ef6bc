#include "blockstab/builders.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace blockstab {

GoldenInstance counterexample_triangle(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0 / 3.0)) throw ModelError("the triangle needs 0 < epsilon < 1/3");
  const double inf = kForbidden;
  const double e = epsilon;
  PottsInstance inst(3, 3, {inf, 0, e, 0, inf, e, e, 0, inf}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  return {std::move(inst), Labeling({1, 0, 1})};
}

CombinedExample combined_example(double epsilon, double gamma) {
  if (!(epsilon > 0.0) || !(gamma > 0.0) || !(gamma < 2.0)) throw ModelError("need epsilon > 0 and 0 < gamma < 2");
  enum : NodeId { u, v, w, x, y, z };
  const double inf = kForbidden;
  std::vector<double> costs = {
      0, 0, 2,      // u
      0, inf, inf,  // v
      0, 0, 2,      // w
      2, 0, 2,      // x
      2, 0, 2,      // y
      0, 1, 1,      // z
  };
  std::vector<Edge> edges = {{u, v, 2.0},     {u, w, 2.0}, {v, w, 2.0}, {u, x, epsilon},
                             {w, y, epsilon}, {x, y, 2.0}, {y, z, 2.0 - gamma}};
  CombinedExample out;
  out.instance = PottsInstance(6, 3, std::move(costs), std::move(edges));
  out.optimum = Labeling({0, 0, 0, 1, 1, 1});
  out.blocks.blocks = {NodeSet({u, v, w}), NodeSet({x, y, z})};
  out.blocks.validate(6);
  out.delta = BlockDualSolution(3, boundary_edges(out.instance, out.blocks));
  for (std::size_t e : out.delta.edges()) {
    // Both boundary edges run from S (smaller id) to T.
    out.delta.message(e, Side::kFromU)[0] = epsilon;
    out.delta.message(e, Side::kFromV)[0] = -epsilon;
  }
  return out;
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  // Portable across standard libraries, unlike std::uniform_*_distribution.
  double real(const Range& r) {
    const double unit = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return r.lo + (r.hi - r.lo) * unit;
  }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(rng_() % span);
  }
  double draw(const Range& r, bool integral) {
    if (!integral) return real(r);
    return static_cast<double>(integer(static_cast<std::int64_t>(std::ceil(r.lo)),
                                       static_cast<std::int64_t>(std::floor(r.hi))));
  }

 private:
  std::mt19937_64 rng_;
};

void check_spec(const RandomSpec& spec) {
  if (spec.num_labels < 1) throw ModelError("need at least one label");
  if (spec.costs.hi < spec.costs.lo || spec.weights.hi < spec.weights.lo) throw ModelError("empty range");
  if (spec.weights.lo < 0.0) throw ModelError("weights must be nonnegative");
  if (spec.integer && std::floor(spec.costs.hi) < std::ceil(spec.costs.lo)) throw ModelError("no integer in range");
  if (spec.integer && std::floor(spec.weights.hi) < std::ceil(spec.weights.lo)) throw ModelError("no integer in range");
}

}  // namespace

PottsInstance random_grid(int rows, int cols, const RandomSpec& spec) {
  if (rows < 1 || cols < 1) throw ModelError("grid needs at least one row and column");
  check_spec(spec);
  Sampler rng(spec.seed);
  const int n = rows * cols;
  std::vector<double> costs(static_cast<std::size_t>(n) * spec.num_labels);
  for (double& c : costs) c = rng.draw(spec.costs, spec.integer);
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const NodeId u = r * cols + c;
      if (c + 1 < cols) edges.push_back({u, u + 1, rng.draw(spec.weights, spec.integer)});
      if (r + 1 < rows) edges.push_back({u, u + cols, rng.draw(spec.weights, spec.integer)});
    }
  }
  return PottsInstance(n, spec.num_labels, std::move(costs), std::move(edges));
}

PottsInstance random_tree(int num_nodes, const RandomSpec& spec) {
  if (num_nodes < 1) throw ModelError("tree needs at least one node");
  check_spec(spec);
  Sampler rng(spec.seed);
  std::vector<double> costs(static_cast<std::size_t>(num_nodes) * spec.num_labels);
  for (double& c : costs) c = rng.draw(spec.costs, spec.integer);
  std::vector<Edge> edges;
  for (NodeId u = 1; u < num_nodes; ++u) {
    const auto parent = static_cast<NodeId>(rng.integer(0, u - 1));
    edges.push_back({parent, u, rng.draw(spec.weights, spec.integer)});
  }
  return PottsInstance(num_nodes, spec.num_labels, std::move(costs), std::move(edges));
}

double birchfield_tomasi(const GrayImage& left, const GrayImage& right, int row, int cl, int cr) {
  auto bounds = [row](const GrayImage& img, int col) {
    const double centre = img.at(row, col);
    const double prev = 0.5 * (centre + img.at(row, std::max(col - 1, 0)));
    const double next = 0.5 * (centre + img.at(row, std::min(col + 1, img.width - 1)));
    return std::pair{std::min({prev, centre, next}), std::max({prev, centre, next})};
  };
  const double il = left.at(row, cl);
  const double ir = right.at(row, cr);
  const auto [rmin, rmax] = bounds(right, cr);
  const auto [lmin, lmax] = bounds(left, cl);
  const double d_lr = std::max({0.0, il - rmax, rmin - il});
  const double d_rl = std::max({0.0, ir - lmax, lmin - ir});
  return std::min(d_lr, d_rl);
}

PottsInstance build_stereo(const GrayImage& left, const GrayImage& right, const StereoParams& params) {
  if (left.width != right.width || left.height != right.height) throw ModelError("stereo images differ in size");
  if (params.num_labels < 1 || params.num_labels > left.width) throw ModelError("label count must be in [1, width]");
  const int rows = left.height, cols = left.width, k = params.num_labels;
  std::vector<double> costs(static_cast<std::size_t>(rows) * cols * k);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      for (int i = 0; i < k; ++i) {
        double& cost = costs[(static_cast<std::size_t>(r) * cols + c) * k + i];
        if (c - i < 0) {
          cost = kForbidden;
          continue;
        }
        const double d = params.birchfield_tomasi ? birchfield_tomasi(left, right, r, c, c - i)
                                                  : left.at(r, c) - right.at(r, c - i);
        cost = d * d;
      }
    }
  }
  auto weight = [&](int r1, int c1, int r2, int c2) {
    return std::abs(left.at(r1, c1) - left.at(r2, c2)) < params.T ? params.P * params.s : params.s;
  };
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const NodeId u = r * cols + c;
      if (c + 1 < cols) edges.push_back({u, u + 1, weight(r, c, r, c + 1)});
      if (r + 1 < rows) edges.push_back({u, u + cols, weight(r, c, r + 1, c)});
    }
  }
  return PottsInstance(rows * cols, k, std::move(costs), std::move(edges));
}

double segmentation_weight(double rgb_difference, double distance, const SegmentationParams& params) {
  if (!(distance > 0.0)) throw ModelError("pixel distance must be positive");
  const double g = rgb_difference;
  return params.lambda1 + params.lambda2 * std::exp(-g * g / (2.0 * params.sigma * params.sigma)) / distance;
}

PottsInstance build_segmentation(const RgbImage& image, const std::vector<std::vector<double>>& node_costs,
                                 const SegmentationParams& params) {
  const int rows = image.height, cols = image.width;
  if (node_costs.size() != static_cast<std::size_t>(rows) * cols)
    throw ModelError("node cost rows do not match the image size");
  if (node_costs.empty() || node_costs.front().empty()) throw ModelError("node costs are empty");
  const auto k = static_cast<int>(node_costs.front().size());
  std::vector<double> costs;
  costs.reserve(node_costs.size() * k);
  for (const auto& row : node_costs) {
    if (row.size() != static_cast<std::size_t>(k)) throw ModelError("node cost rows differ in length");
    costs.insert(costs.end(), row.begin(), row.end());
  }
  auto diff = [&](int r1, int c1, int r2, int c2) {
    const auto& a = image.at(r1, c1);
    const auto& b = image.at(r2, c2);
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
  };
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const NodeId u = r * cols + c;
      if (c + 1 < cols) edges.push_back({u, u + 1, segmentation_weight(diff(r, c, r, c + 1), 1.0, params)});
      if (r + 1 < rows) edges.push_back({u, u + cols, segmentation_weight(diff(r, c, r + 1, c), 1.0, params)});
    }
  }
  return PottsInstance(rows * cols, k, std::move(costs), std::move(edges));
}

StereoPair synthetic_stereo_pair(int rows, int cols, int num_labels, std::uint64_t seed) {
  if (rows < 1 || cols < 1 || num_labels < 1) throw ModelError("bad stereo pair size");
  Sampler rng(seed);
  StereoPair pair;
  pair.disparity.assign(static_cast<std::size_t>(rows) * cols, num_labels > 1 ? 1 : 0);
  // Foreground patches at two larger disparities.
  auto patch = [&](int r0, int r1, int c0, int c1, int d) {
    for (int r = r0; r < r1; ++r)
      for (int c = c0; c < c1; ++c) pair.disparity[static_cast<std::size_t>(r) * cols + c] = d;
  };
  const int top = std::min(num_labels - 1, num_labels / 2 + 1);
  patch(rows / 5, rows / 2, cols / 4, cols / 2, std::min(num_labels - 1, num_labels / 2));
  patch(rows / 2, rows * 4 / 5, cols / 2, cols * 4 / 5, top);

  GrayImage right{cols, rows, std::vector<double>(static_cast<std::size_t>(rows) * cols)};
  for (double& p : right.pixels) p = static_cast<double>(rng.integer(0, 255));
  GrayImage left{cols, rows, std::vector<double>(static_cast<std::size_t>(rows) * cols)};
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int d = pair.disparity[static_cast<std::size_t>(r) * cols + c];
      left.at(r, c) = c - d >= 0 ? right.at(r, c - d) : static_cast<double>(rng.integer(0, 255));
    }
  }
  pair.left = std::move(left);
  pair.right = std::move(right);
  return pair;
}

}  // namespace blockstab
