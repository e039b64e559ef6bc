// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Usage: acceptance <path-to-blockstab-cli> [workdir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "blockstab/block_finder.hpp"
#include "blockstab/builders.hpp"
#include "blockstab/dual_decomp.hpp"
#include "blockstab/image.hpp"
#include "blockstab/io.hpp"
#include "blockstab/lp_solver.hpp"
#include "blockstab/oracle.hpp"
#include "blockstab/stability.hpp"
#include "support.hpp"

namespace bs = blockstab;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and limits.
constexpr double kValueTol = 1e-6;        // LP and dual values
constexpr double kPersistTol = 1e-6;      // x_u(g(u)) >= 1 - tol
constexpr double kGoldenSeconds = 1.0;    // criteria 1 and 2
constexpr double kSuiteSeconds = 600.0;   // criteria 3 and 4
constexpr double kStereoSeconds = 1800.0; // criterion 7
constexpr int kSuiteSize = 200;
constexpr int kTrees = 50;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.size() < 400) detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

struct SuiteInstance {
  bs::PottsInstance inst;
  bs::Labeling g;
};

// Seeded 3x3 and 4x4 grids with k = 3 and integer data, so ties occur.
const std::vector<SuiteInstance>& suite() {
  static const std::vector<SuiteInstance> instances = [] {
    std::vector<SuiteInstance> out;
    for (int s = 0; s < kSuiteSize; ++s) {
      const int side = s % 2 == 0 ? 3 : 4;
      bs::PottsInstance inst = bs::random_grid(side, side, ref::grid_spec(static_cast<std::uint64_t>(1000 + s)));
      bs::MapOptions mo;
      mo.arithmetic = bs::Arithmetic::kExact;
      bs::Labeling g = bs::solve_map(inst, mo).labeling;
      out.push_back({std::move(inst), std::move(g)});
    }
    return out;
  }();
  return instances;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

Outcome triangle() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto tri = bs::counterexample_triangle(0.1);

  bs::MapOptions mo;
  mo.arithmetic = bs::Arithmetic::kExact;
  const bs::MapResult map = bs::solve_map(tri.instance, mo);
  const auto exact = bs::exact_objective(tri.instance, map.labeling);
  o.require(exact && *exact == 2, "MAP objective is not exactly 2");

  const bs::LpResult lp = bs::solve_lp(tri.instance);
  o.require(std::abs(lp.primal.objective - 1.65) <= kValueTol, "LP " + fmt(lp.primal.objective));
  const bs::PersistencyMask mask = bs::persistency_mask(lp.primal, map.labeling);
  o.require(mask.fraction == 0.0, "persistent fraction " + fmt(mask.fraction));
  o.require(mask.count(bs::Persistency::kFractional) == 3, "LP not fractional at all nodes");

  const bs::BlockDecomposition singles = bs::singleton_blocks(3);
  const bs::BlockDualSolution zero(3, bs::boundary_edges(tri.instance, singles));
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < 3; ++b) {
    const auto v = bs::check_block_stable(tri.instance, singles, b, map.labeling, inf, inf, zero);
    o.require(v.stable && v.proven, "singleton " + std::to_string(b) + " not stable");
  }
  const double t = seconds_since(t0);
  o.require(t < kGoldenSeconds, "runtime " + fmt(t) + " s");
  o.detail = (o.pass ? "LP " + fmt(lp.primal.objective) + ", " + fmt(t) + " s" : o.detail);
  return o;
}

Outcome combined() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto ce = bs::combined_example(0.01, 0.1);
  const bs::LpResult lp = bs::solve_lp(ce.instance);
  const bs::PersistencyMask mask = bs::persistency_mask(lp.primal, ce.optimum);
  o.require(mask.fraction == 1.0, "persistent fraction " + fmt(mask.fraction));

  const auto eta = bs::CertifiedDual::certify(ce.instance, lp.dual, lp.primal.objective);
  const bs::BlockDualSolution delta = bs::restrict_dual(ce.instance, eta, ce.blocks);
  const bs::BlockDualValue b = bs::block_dual_value(ce.instance, ce.blocks, delta);
  o.require(std::abs(b.total - 1.02) <= kValueTol, "B(delta*) " + fmt(b.total));
  o.require(std::abs(b.block_values[0] - 0.02) <= kValueTol, "sub-LP S " + fmt(b.block_values[0]));
  o.require(std::abs(b.block_values[1] - 1.0) <= kValueTol, "sub-LP T " + fmt(b.block_values[1]));

  const auto s = bs::check_block_stable(ce.instance, ce.blocks, 0, ce.optimum, 2.0, 1.0, delta);
  o.require(s.stable, "block S not (2,1)-stable");
  const auto full = bs::check_stable(ce.instance, ce.optimum, 2.0, 1.0);
  o.require(!full.stable, "full instance reported stable");
  const double t = seconds_since(t0);
  o.require(t < kGoldenSeconds, "runtime " + fmt(t) + " s");
  if (o.pass) o.detail = "B " + fmt(b.total) + ", " + fmt(t) + " s";
  return o;
}

Outcome soundness() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t certified = 0, violations = 0;
  for (const SuiteInstance& s : suite()) {
    bs::FinderOptions fo;
    fo.iterations = 5;
    for (bool optimized : {false, true}) {
      const bs::FinderReport r = optimized ? bs::run_optimized(s.inst, s.g, fo) : bs::run(s.inst, s.g, fo);
      for (bs::NodeId u = 0; u < s.inst.num_nodes(); ++u) {
        if (!r.certified[u]) continue;
        ++certified;
        if (r.lp.primal.x(u, s.g[u]) < 1.0 - kPersistTol) ++violations;
      }
    }
  }
  const double t = seconds_since(t0);
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.require(certified > 0, "nothing certified");
  o.require(t < kSuiteSeconds, "runtime " + fmt(t) + " s");
  if (o.pass)
    o.detail = std::to_string(kSuiteSize) + " instances, " + std::to_string(certified) +
               " certified node checks, 0 violations, " + fmt(t) + " s";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = Clock::now();
  int agree = 0, maps = 0, map_agree = 0;
  for (const SuiteInstance& s : suite()) {
    bs::HammingOptions ho;
    ho.arithmetic = bs::Arithmetic::kExact;
    const auto v = bs::check_stable(s.inst, s.g, 2.0, 1.0, ho);
    const auto w = bs::oracle::enumerate_stability(s.inst, s.g, 2.0, 1.0, bs::Arithmetic::kExact,
                                                   std::uint64_t{1} << 26);
    agree += v.stable == w.stable && v.hamming == w.hamming && v.proven;

    if (std::pow(3.0, s.inst.num_nodes()) <= 1e6) {
      ++maps;
      bs::MapOptions mo;
      mo.arithmetic = bs::Arithmetic::kExact;
      const bs::MapResult m = bs::solve_map(s.inst, mo);
      const auto e = bs::oracle::enumerate_map(s.inst, bs::Arithmetic::kExact);
      map_agree += m.labeling == e.labeling;
    }
  }
  const double t = seconds_since(t0);
  o.require(agree == kSuiteSize, "stability " + std::to_string(agree) + "/" + std::to_string(kSuiteSize));
  o.require(maps > 0 && map_agree == maps, "MAP " + std::to_string(map_agree) + "/" + std::to_string(maps));
  o.require(t < kSuiteSeconds, "runtime " + fmt(t) + " s");
  if (o.pass)
    o.detail = "stability " + std::to_string(agree) + "/" + std::to_string(kSuiteSize) + ", MAP " +
               std::to_string(map_agree) + "/" + std::to_string(maps) + ", " + fmt(t) + " s";
  return o;
}

bs::BlockDecomposition random_decomposition(int n, std::mt19937& rng) {
  const int parts = 1 + static_cast<int>(rng() % 3);
  std::vector<std::vector<bs::NodeId>> members(parts + 1);
  for (bs::NodeId u = 0; u < n; ++u) members[rng() % (parts + 1)].push_back(u);
  bs::BlockDecomposition d;
  for (int b = 0; b < parts; ++b) d.blocks.emplace_back(members[b]);
  d.boundary_block = bs::NodeSet(members[parts]);
  d.validate(n);
  return d;
}

Outcome duality() {
  Outcome o;
  std::mt19937 rng(2024);
  double worst = 0.0;
  for (const SuiteInstance& s : suite()) {
    const bs::LpResult lp = bs::solve_lp(s.inst);
    const double target = lp.primal.objective;
    const double p = bs::pairwise_dual_value(s.inst, lp.dual);
    worst = std::max(worst, std::abs(p - target));
    const auto eta = bs::CertifiedDual::certify(s.inst, lp.dual, target);
    for (int t = 0; t < 3; ++t) {
      const bs::BlockDecomposition d = random_decomposition(s.inst.num_nodes(), rng);
      const bs::BlockDualSolution delta = bs::restrict_dual(s.inst, eta, d);
      worst = std::max(worst, std::abs(bs::block_dual_value(s.inst, d, delta).total - target));
      const auto subs = bs::solve_block_subproblems(s.inst, d, delta);
      std::vector<bs::DualSolution> duals;
      for (const auto& sub : subs) duals.push_back(sub.lp ? sub.lp->dual : bs::DualSolution());
      const bs::DualSolution full = bs::extend_dual(s.inst, d, delta, duals);
      worst = std::max(worst, std::abs(bs::pairwise_dual_value(s.inst, full) - target));
    }
  }
  o.require(worst <= kValueTol, "largest deviation " + fmt(worst));
  if (o.pass) o.detail = "largest deviation " + fmt(worst);
  return o;
}

Outcome trees() {
  Outcome o;
  int unique = 0;
  for (int s = 0; s < kTrees; ++s) {
    bs::RandomSpec spec;
    spec.num_labels = 3;
    spec.integer = true;
    spec.costs = {0.0, 9.0};
    spec.weights = {0.0, 2.0};
    spec.seed = static_cast<std::uint64_t>(300 + s);
    const int n = 4 + s % 9;
    const bs::PottsInstance tree = bs::random_tree(n, spec);
    const auto best = bs::oracle::enumerate_map(tree, bs::Arithmetic::kExact);
    if (ref::count_minimizers(tree, best.value) != 1) continue;
    ++unique;
    const bs::LpResult lp = bs::solve_lp(tree);
    const double frac = bs::persistency_mask(lp.primal, best.labeling).fraction;
    o.require(frac == 1.0, "tree seed " + std::to_string(300 + s) + " fraction " + fmt(frac));
  }
  o.require(unique > 0, "no tree with a unique optimum");
  if (o.pass) o.detail = std::to_string(unique) + "/" + std::to_string(kTrees) + " trees with unique MAP, all tight";
  return o;
}

int run_cli(const std::string& cli, const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + cli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

Outcome stereo(const std::string& cli, const fs::path& dir) {
  Outcome o;
  if (cli.empty()) {
    o.require(false, "no CLI path given");
    return o;
  }
  fs::create_directories(dir);
  auto p = [&](const char* name) { return "\"" + (dir / name).string() + "\""; };
  const auto t0 = Clock::now();
  bool ok = run_cli(cli, "build stereo --synthetic --rows 40 --cols 40 --k 8 -o " + p("stereo.potts"),
                    dir / "build.log") == 0;
  ok = ok && run_cli(cli, "solve " + p("stereo.potts") + " -o " + p("g.txt"), dir / "solve.log") == 0;
  ok = ok && run_cli(cli, "lp " + p("stereo.potts") + " --labeling " + p("g.txt") + " --primal " + p("x.txt"),
                     dir / "lp.log") == 0;
  ok = ok && run_cli(cli, "find-blocks " + p("stereo.potts") + " --iters 3 --labeling " + p("g.txt") + " -o " +
                              p("report.txt"),
                     dir / "find.log") == 0;
  ok = ok && run_cli(cli, "render --report " + p("report.txt") + " --instance " + p("stereo.potts") +
                              " --rows 40 --cols 40 --labeling " + p("g.txt") + " -o " + p("map.ppm"),
                     dir / "render.log") == 0;
  const double t = seconds_since(t0);
  o.require(ok, "a CLI step failed (logs in " + dir.string() + ")");
  o.require(t < kStereoSeconds, "runtime " + fmt(t) + " s");
  if (!ok) return o;

  const bs::PottsInstance inst = bs::io::load_instance((dir / "stereo.potts").string());
  std::ifstream gin(dir / "g.txt"), xin(dir / "x.txt"), rin(dir / "report.txt");
  const bs::Labeling g = bs::io::read_labeling(gin);
  const bs::PrimalSolution x = bs::io::read_primal(xin, inst);
  const bs::io::ReportFile report = bs::io::read_report(rin);
  std::size_t certified = 0, violations = 0;
  for (bs::NodeId u = 0; u < inst.num_nodes(); ++u) {
    if (!report.stable[u]) continue;
    ++certified;
    if (x.x(u, g[u]) < 1.0 - kPersistTol) ++violations;
  }
  o.require(violations == 0, std::to_string(violations) + " certified nodes not persistent");

  const bs::RgbImage img = bs::read_ppm((dir / "map.ppm").string());
  bool pixels_ok = img.width == 40 && img.height == 40 && img.pixels.size() == 1600;
  for (const auto& px : img.pixels)
    for (double c : px) pixels_ok = pixels_ok && c >= 0.0 && c <= 255.0;
  o.require(pixels_ok, "PPM map malformed");
  if (o.pass)
    o.detail = "certified " + std::to_string(certified) + "/1600, 0 violations, PPM 40x40, " + fmt(t) + " s";
  return o;
}

Outcome vision_weights() {
  Outcome o;
  const double seg = bs::segmentation_weight(0.0, 1.0);
  o.require(seg == 105.0, "segmentation weight " + fmt(seg));
  const bs::GrayImage flat{10, 5, std::vector<double>(50, 128.0)};
  const bs::PottsInstance st = bs::build_stereo(flat, flat);
  bool all = st.num_edges() > 0;
  for (const bs::Edge& e : st.edges()) all = all && e.weight == 100.0;
  o.require(all, "stereo uniform weight differs from 100");
  if (o.pass) o.detail = "105 and 100";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const fs::path dir = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "blockstab_acceptance";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 triangle golden instance", triangle},
      {"2 combined golden instance", combined},
      {"3 finder soundness on 200 grids", soundness},
      {"4 oracle equivalence", oracle_equivalence},
      {"5 duality identities", duality},
      {"6 tree tightness", trees},
      {"7 40x40 synthetic stereo", [&] { return stereo(cli, dir); }},
      {"8 vision weight spot checks", vision_weights},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    failed += r.pass ? 0 : 1;
    std::cout << "criterion " << name << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.detail << ")" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
