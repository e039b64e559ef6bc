#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "blockstab/block_finder.hpp"
#include "blockstab/builders.hpp"
#include "blockstab/image.hpp"
#include "blockstab/io.hpp"
#include "blockstab/lp_solver.hpp"
#include "blockstab/render.hpp"
#include "blockstab/stability.hpp"

namespace bs = blockstab;

namespace {

struct Global {
  double tol = bs::kTolerance;
  bool rational = false;

  bs::Arithmetic arithmetic() const { return rational ? bs::Arithmetic::kExact : bs::Arithmetic::kFloat; }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

void save_or_print(const std::string& path, const bs::PottsInstance& inst) {
  if (path.empty() || path == "-") bs::io::write_instance(std::cout, inst);
  else bs::io::save_instance(path, inst);
}

std::string format_value(const bs::PottsInstance& inst, const bs::Labeling& f, double value, bool exact) {
  if (exact) {
    if (auto q = bs::exact_objective(inst, f)) return bs::to_string(*q);
  }
  return bs::io::format_number(value);
}

double parse_factor(const std::string& s) {
  const double v = bs::io::parse_number(s);
  if (!(v >= 1.0)) throw std::runtime_error("beta and gamma must be at least 1");
  return v;
}

bs::Labeling reference_labeling(const bs::PottsInstance& inst, const std::string& path, const Global& g) {
  if (!path.empty()) {
    auto in = open_in(path);
    bs::Labeling f = bs::io::read_labeling(in);
    inst.validate_labeling(f);
    return f;
  }
  bs::MapOptions mo;
  mo.arithmetic = g.arithmetic();
  const bs::MapResult map = bs::solve_map(inst, mo);
  if (!map.proven_optimal) std::cerr << "warning: MAP search hit its node limit; using the best labeling found\n";
  return map.labeling;
}

bs::LpOptions lp_options(const Global& g) {
  bs::LpOptions o;
  o.arithmetic = g.arithmetic();
  return o;
}

std::string write_labels(const bs::Labeling& f) {
  std::ostringstream s;
  bs::io::write_labeling(s, f);
  std::string out = s.str();
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Potts MAP inference, LP persistency and block stability"};
  app.require_subcommand(1);
  Global global;
  app.add_option("--tol", global.tol, "tolerance for integrality and duality-gap tests")->capture_default_str();
  app.add_flag("--rational", global.rational, "compare objectives exactly where supported");

  // build
  auto* build = app.add_subcommand("build", "write a .potts instance");
  build->require_subcommand(1);
  std::string out_path;

  auto* grid = build->add_subcommand("grid", "random 4-connected grid");
  int rows = 3, cols = 3;
  bs::RandomSpec spec;
  grid->add_option("--rows", rows)->capture_default_str();
  grid->add_option("--cols", cols)->capture_default_str();
  grid->add_option("--k", spec.num_labels)->capture_default_str();
  grid->add_option("--seed", spec.seed)->capture_default_str();
  grid->add_option("--cost-lo", spec.costs.lo)->capture_default_str();
  grid->add_option("--cost-hi", spec.costs.hi)->capture_default_str();
  grid->add_option("--weight-lo", spec.weights.lo)->capture_default_str();
  grid->add_option("--weight-hi", spec.weights.hi)->capture_default_str();
  grid->add_flag("--integer", spec.integer, "draw integer costs and weights");
  grid->add_option("-o,--output", out_path);

  auto* tree = build->add_subcommand("tree", "random tree");
  int tree_nodes = 8;
  tree->add_option("--nodes", tree_nodes)->capture_default_str();
  tree->add_option("--k", spec.num_labels)->capture_default_str();
  tree->add_option("--seed", spec.seed)->capture_default_str();
  tree->add_flag("--integer", spec.integer);
  tree->add_option("-o,--output", out_path);

  auto* golden = build->add_subcommand("golden", "worked examples: triangle or combined");
  std::string which;
  double eps = 0.1, gamma_edge = 0.1;
  bool eps_set = false;
  golden->add_option("name", which)->required()->check(CLI::IsMember({"triangle", "combined"}));
  golden->add_option("--eps", eps, "epsilon (triangle 0.1, combined 0.01 by default)")
      ->each([&](const std::string&) { eps_set = true; });
  golden->add_option("--gamma", gamma_edge, "combined example: y-z edge weight is 2 - gamma")->capture_default_str();
  golden->add_option("-o,--output", out_path);
  std::string golden_labeling;
  golden->add_option("--labeling", golden_labeling, "also write the optimum g");

  auto* stereo = build->add_subcommand("stereo", "disparity MRF from a rectified pair");
  std::string left_path, right_path, save_prefix;
  bs::StereoParams sp;
  bool no_bt = false, synthetic = false;
  std::uint64_t stereo_seed = 7;
  stereo->add_option("--left", left_path, "left PGM");
  stereo->add_option("--right", right_path, "right PGM");
  stereo->add_option("--k", sp.num_labels)->capture_default_str();
  stereo->add_option("--s", sp.s)->capture_default_str();
  stereo->add_option("--P", sp.P)->capture_default_str();
  stereo->add_option("--T", sp.T)->capture_default_str();
  stereo->add_flag("--no-bt", no_bt, "plain squared difference instead of the sampling-insensitive one");
  stereo->add_flag("--synthetic", synthetic, "generate a textured synthetic pair of --rows x --cols");
  stereo->add_option("--rows", rows);
  stereo->add_option("--cols", cols);
  stereo->add_option("--seed", stereo_seed)->capture_default_str();
  stereo->add_option("--save-images", save_prefix, "write the synthetic pair as <prefix>_left.pgm, <prefix>_right.pgm");
  stereo->add_option("-o,--output", out_path);

  auto* seg = build->add_subcommand("segmentation", "object segmentation MRF");
  std::string image_path, costs_path;
  bs::SegmentationParams segp;
  seg->add_option("--image", image_path, "RGB PPM")->required();
  seg->add_option("--costs", costs_path, "node-cost block, one row of k costs per pixel")->required();
  seg->add_option("--lambda1", segp.lambda1)->capture_default_str();
  seg->add_option("--lambda2", segp.lambda2)->capture_default_str();
  seg->add_option("--sigma", segp.sigma)->capture_default_str();
  seg->add_option("-o,--output", out_path);

  // solve
  auto* solve = app.add_subcommand("solve", "exact MAP labeling");
  std::string inst_path, labeling_out;
  solve->add_option("instance", inst_path)->required();
  solve->add_option("-o,--output", labeling_out, "write the labeling");

  // lp
  auto* lp = app.add_subcommand("lp", "pairwise LP relaxation");
  std::string primal_out, dual_out, labeling_in;
  lp->add_option("instance", inst_path)->required();
  lp->add_option("--labeling", labeling_in, "reference labeling g (solved when absent)");
  lp->add_option("--primal", primal_out, "write the LP solution");
  lp->add_option("--dual", dual_out, "write the optimal dual");

  // check-stable
  auto* check = app.add_subcommand("check-stable", "max-Hamming stability test");
  std::string beta_s = "2", gamma_s = "1", block_path, witness_out;
  check->add_option("instance", inst_path)->required();
  check->add_option("--beta", beta_s)->capture_default_str();
  check->add_option("--gamma", gamma_s)->capture_default_str();
  check->add_option("--labeling", labeling_in);
  check->add_option("--block", block_path, "node ids of a block; tests its restricted instance");
  check->add_option("--witness", witness_out, "write the witness labeling when unstable");
  std::size_t node_limit = 2000;
  check->add_option("--node-limit", node_limit, "branch-and-bound nodes per search")->capture_default_str();
  std::size_t check_size_limit = 0;
  check->add_option("--search-size-limit", check_size_limit, "skip exact searches on larger groups (0: never)")
      ->capture_default_str();

  // find-blocks
  auto* find = app.add_subcommand("find-blocks", "search for stable blocks");
  std::string report_out;
  int iters = 5;
  bool optimized = false;
  unsigned jobs = 1;
  find->add_option("instance", inst_path)->required();
  find->add_option("--beta", beta_s)->capture_default_str();
  find->add_option("--gamma", gamma_s)->capture_default_str();
  find->add_option("--iters", iters, "iterations M")->capture_default_str()->check(CLI::PositiveNumber);
  find->add_flag("--optimized", optimized, "one merged search per iteration");
  find->add_option("--jobs", jobs, "concurrent block checks")->capture_default_str()->check(CLI::PositiveNumber);
  find->add_option("--node-limit", node_limit, "branch-and-bound nodes per block search")->capture_default_str();
  std::size_t find_size_limit = 60;
  find->add_option("--search-size-limit", find_size_limit,
                   "blocks with more nodes are reported unproven without an exact search (0: never)")
      ->capture_default_str();
  find->add_option("--labeling", labeling_in);
  find->add_option("-o,--output", report_out, "write the report");

  // render
  auto* render = app.add_subcommand("render", "decomposition map as an ASCII PPM");
  std::string report_in;
  render->add_option("--report", report_in)->required();
  render->add_option("--instance", inst_path)->required();
  render->add_option("--rows", rows)->required();
  render->add_option("--cols", cols)->required();
  render->add_option("--labeling", labeling_in, "labels for the gray levels (solved when absent)");
  render->add_option("-o,--output", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (grid->parsed()) {
      save_or_print(out_path, bs::random_grid(rows, cols, spec));
    } else if (tree->parsed()) {
      save_or_print(out_path, bs::random_tree(tree_nodes, spec));
    } else if (golden->parsed()) {
      bs::PottsInstance inst;
      bs::Labeling g;
      if (which == "triangle") {
        auto gi = bs::counterexample_triangle(eps_set ? eps : 0.1);
        inst = std::move(gi.instance);
        g = gi.optimum;
      } else {
        auto ce = bs::combined_example(eps_set ? eps : 0.01, gamma_edge);
        inst = std::move(ce.instance);
        g = ce.optimum;
      }
      save_or_print(out_path, inst);
      if (!golden_labeling.empty()) {
        auto out = open_out(golden_labeling);
        bs::io::write_labeling(out, g);
      }
    } else if (stereo->parsed()) {
      sp.birchfield_tomasi = !no_bt;
      bs::GrayImage left, right;
      if (synthetic) {
        auto pair = bs::synthetic_stereo_pair(rows, cols, sp.num_labels, stereo_seed);
        left = std::move(pair.left);
        right = std::move(pair.right);
        if (!save_prefix.empty()) {
          bs::write_pgm(save_prefix + "_left.pgm", left);
          bs::write_pgm(save_prefix + "_right.pgm", right);
        }
      } else {
        if (left_path.empty() || right_path.empty()) throw std::runtime_error("--left and --right are required");
        left = bs::read_pgm(left_path);
        right = bs::read_pgm(right_path);
      }
      save_or_print(out_path, bs::build_stereo(left, right, sp));
    } else if (seg->parsed()) {
      const bs::RgbImage image = bs::read_ppm(image_path);
      auto in = open_in(costs_path);
      save_or_print(out_path, bs::build_segmentation(image, bs::io::read_cost_block(in), segp));
    } else if (solve->parsed()) {
      const bs::PottsInstance inst = bs::io::load_instance(inst_path);
      bs::MapOptions mo;
      mo.arithmetic = global.arithmetic();
      const bs::MapResult map = bs::solve_map(inst, mo);
      std::cout << "labeling " << write_labels(map.labeling) << '\n';
      std::cout << "objective " << format_value(inst, map.labeling, map.value, global.rational) << '\n';
      std::cout << "proven_optimal " << (map.proven_optimal ? 1 : 0) << '\n';
      if (!labeling_out.empty()) {
        auto out = open_out(labeling_out);
        bs::io::write_labeling(out, map.labeling);
      }
    } else if (lp->parsed()) {
      const bs::PottsInstance inst = bs::io::load_instance(inst_path);
      const bs::LpResult r = bs::solve_lp(inst, lp_options(global));
      const bs::Labeling g = reference_labeling(inst, labeling_in, global);
      const bs::PersistencyMask mask = bs::persistency_mask(r.primal, g, global.tol);
      std::cout << "objective "
                << (r.exact_objective ? bs::to_string(*r.exact_objective) : bs::io::format_number(r.primal.objective))
                << '\n';
      std::cout << "persistent_fraction " << bs::io::format_number(mask.fraction) << '\n';
      std::cout << "fractional_nodes";
      for (std::size_t u = 0; u < mask.flags.size(); ++u)
        if (mask.flags[u] == bs::Persistency::kFractional) std::cout << ' ' << u;
      std::cout << '\n';
      std::cout << "mismatched_nodes " << mask.count(bs::Persistency::kIntegralMismatch) << '\n';
      if (!primal_out.empty()) {
        auto out = open_out(primal_out);
        bs::io::write_primal(out, inst, r.primal);
      }
      if (!dual_out.empty()) {
        auto out = open_out(dual_out);
        bs::io::write_dual(out, inst, r.dual);
      }
    } else if (check->parsed()) {
      const bs::PottsInstance inst = bs::io::load_instance(inst_path);
      const bs::Labeling g = reference_labeling(inst, labeling_in, global);
      const double beta = parse_factor(beta_s), gamma = parse_factor(gamma_s);
      bs::HammingOptions ho;
      ho.arithmetic = global.arithmetic();
      ho.node_limit = node_limit;
      ho.search_size_limit = check_size_limit;
      bs::StabilityVerdict v;
      if (block_path.empty()) {
        v = bs::check_stable(inst, g, beta, gamma, ho);
      } else {
        auto in = open_in(block_path);
        std::vector<bs::NodeId> nodes;
        for (long long u; in >> u;) {
          if (u < 0 || u >= inst.num_nodes()) throw std::runtime_error("block node out of range");
          nodes.push_back(static_cast<bs::NodeId>(u));
        }
        bs::BlockDecomposition split;
        split.blocks.emplace_back(std::move(nodes));
        split.boundary_block = bs::set_difference(bs::NodeSet::range(inst.num_nodes()), split.blocks[0]);
        split.validate(inst.num_nodes());
        const bs::LpResult r = bs::solve_lp(inst, lp_options(global));
        const auto eta = bs::CertifiedDual::certify(inst, r.dual, r.primal.objective, global.tol);
        const bs::BlockDualSolution delta = bs::restrict_dual(inst, eta, split);
        v = bs::check_block_stable(inst, split, 0, g, beta, gamma, delta, ho);
      }
      bs::io::write_verdict(std::cout, v);
      if (!v.proven) std::cout << "proven 0\n";
      if (v.reference_suboptimal) std::cout << "reference_suboptimal 1\n";
      if (v.witness && !witness_out.empty()) {
        auto out = open_out(witness_out);
        bs::io::write_labeling(out, *v.witness);
      }
    } else if (find->parsed()) {
      const bs::PottsInstance inst = bs::io::load_instance(inst_path);
      const bs::Labeling g = reference_labeling(inst, labeling_in, global);
      bs::FinderOptions fo;
      fo.beta = parse_factor(beta_s);
      fo.gamma = parse_factor(gamma_s);
      fo.iterations = iters;
      fo.search.jobs = jobs;
      fo.search.node_limit = node_limit;
      fo.search.search_size_limit = find_size_limit;
      fo.search.arithmetic = global.arithmetic();
      fo.lp = lp_options(global);
      fo.tol = global.tol;
      const bs::FinderReport rep = optimized ? bs::run_optimized(inst, g, fo) : bs::run(inst, g, fo);
      std::cout << "certified_fraction " << bs::io::format_number(rep.certified_fraction) << '\n';
      for (std::size_t t = 0; t < rep.iterations.size(); ++t)
        std::cout << "iteration " << t + 1 << " certified_fraction "
                  << bs::io::format_number(rep.iterations[t].certified_fraction) << '\n';
      std::cout << "block_sizes";
      for (const auto& [size, count] : rep.block_sizes) std::cout << ' ' << size << ':' << count;
      std::cout << '\n';
      for (const std::string& f : rep.failures) std::cerr << "note: " << f << '\n';
      if (!report_out.empty()) {
        auto out = open_out(report_out);
        bs::io::write_report(out, rep, inst.num_nodes());
      }
    } else if (render->parsed()) {
      const bs::PottsInstance inst = bs::io::load_instance(inst_path);
      if (static_cast<long long>(rows) * cols != inst.num_nodes())
        throw std::runtime_error("rows x cols does not match the instance");
      auto in = open_in(report_in);
      const bs::io::ReportFile report = bs::io::read_report(in);
      const bs::Labeling g = reference_labeling(inst, labeling_in, global);
      bs::write_ppm(out_path, bs::decomposition_map(report, g, inst.num_labels(), rows, cols));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
