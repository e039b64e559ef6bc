#include "blockstab/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace blockstab::io {

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_number(const std::string& token) {
  if (token == "inf" || token == "+inf" || token == "Inf" || token == "INF") return kForbidden;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE)
    throw ParseError("bad number '" + token + "'");
  return v;
}

namespace {

std::string next_token(std::istream& in, const char* what) {
  std::string t;
  if (!(in >> t)) throw ParseError(std::string("unexpected end of input reading ") + what);
  return t;
}

long long next_integer(std::istream& in, const char* what) {
  const std::string t = next_token(in, what);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size()) throw ParseError(std::string("bad integer for ") + what + ": '" + t + "'");
  return v;
}

void expect(std::istream& in, const std::string& word) {
  const std::string t = next_token(in, word.c_str());
  if (t != word) throw ParseError("expected '" + word + "', got '" + t + "'");
}

}  // namespace

void write_instance(std::ostream& out, const PottsInstance& inst) {
  out << "POTTS " << inst.num_nodes() << ' ' << inst.num_labels() << ' ' << inst.num_edges() << '\n';
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    const auto c = inst.costs(u);
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << format_number(c[i]);
    out << '\n';
  }
  for (const Edge& e : inst.edges()) out << e.u << ' ' << e.v << ' ' << format_number(e.weight) << '\n';
}

PottsInstance read_instance(std::istream& in) {
  expect(in, "POTTS");
  const long long n = next_integer(in, "node count");
  const long long k = next_integer(in, "label count");
  const long long m = next_integer(in, "edge count");
  if (n < 0 || k < 1 || m < 0) throw ParseError("bad POTTS header");
  std::vector<double> costs;
  costs.reserve(static_cast<std::size_t>(n * k));
  for (long long t = 0; t < n * k; ++t) costs.push_back(parse_number(next_token(in, "cost")));
  std::vector<Edge> edges;
  for (long long e = 0; e < m; ++e) {
    const auto u = static_cast<NodeId>(next_integer(in, "edge endpoint"));
    const auto v = static_cast<NodeId>(next_integer(in, "edge endpoint"));
    edges.push_back({u, v, parse_number(next_token(in, "weight"))});
  }
  try {
    return PottsInstance(static_cast<int>(n), static_cast<int>(k), std::move(costs), std::move(edges));
  } catch (const ModelError& err) {
    throw ParseError(std::string("invalid instance: ") + err.what());
  }
}

void save_instance(const std::string& path, const PottsInstance& inst) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  write_instance(out, inst);
}

PottsInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_instance(in);
}

std::vector<std::vector<double>> read_cost_block(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    std::string t;
    while (ls >> t) row.push_back(parse_number(t));
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("cost rows differ in length");
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_labeling(std::ostream& out, const Labeling& f) {
  for (std::size_t u = 0; u < f.size(); ++u) out << (u ? " " : "") << f[u];
  out << '\n';
}

Labeling read_labeling(std::istream& in) {
  std::vector<Label> labels;
  std::string t;
  while (in >> t) {
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) throw ParseError("bad label '" + t + "'");
    labels.push_back(static_cast<Label>(v));
  }
  return Labeling(std::move(labels));
}

void write_primal(std::ostream& out, const PottsInstance& inst, const PrimalSolution& x) {
  for (NodeId u = 0; u < x.num_nodes; ++u)
    for (Label i = 0; i < x.num_labels; ++i)
      if (x.x(u, i) != 0.0) out << "x " << u << ' ' << i << ' ' << format_number(x.x(u, i)) << '\n';
  for (std::size_t e = 0; e < x.num_edges; ++e)
    for (Label i = 0; i < x.num_labels; ++i)
      for (Label j = 0; j < x.num_labels; ++j)
        if (x.mu(e, i, j) != 0.0)
          out << "mu " << inst.edge(e).u << ' ' << inst.edge(e).v << ' ' << i << ' ' << j << ' '
              << format_number(x.mu(e, i, j)) << '\n';
  out << "objective " << format_number(x.objective) << '\n';
}

PrimalSolution read_primal(std::istream& in, const PottsInstance& inst) {
  PrimalSolution x;
  x.num_nodes = inst.num_nodes();
  x.num_labels = inst.num_labels();
  x.num_edges = inst.num_edges();
  x.node_marginals.assign(static_cast<std::size_t>(x.num_nodes) * x.num_labels, 0.0);
  x.edge_marginals.assign(x.num_edges * x.num_labels * x.num_labels, 0.0);
  std::string tag;
  auto label = [&](const char* what) {
    const long long v = next_integer(in, what);
    if (v < 0 || v >= inst.num_labels()) throw ParseError("label out of range");
    return static_cast<Label>(v);
  };
  while (in >> tag) {
    if (tag == "x") {
      const long long u = next_integer(in, "node");
      if (u < 0 || u >= inst.num_nodes()) throw ParseError("node out of range");
      const Label i = label("label");
      x.x(static_cast<NodeId>(u), i) = parse_number(next_token(in, "value"));
    } else if (tag == "mu") {
      const auto u = static_cast<NodeId>(next_integer(in, "node"));
      const auto v = static_cast<NodeId>(next_integer(in, "node"));
      const auto e = inst.find_edge(u, v);
      if (!e) throw ParseError("mu line for an unknown edge");
      Label i = label("label");
      Label j = label("label");
      if (u > v) std::swap(i, j);
      x.mu(*e, i, j) = parse_number(next_token(in, "value"));
    } else if (tag == "objective") {
      x.objective = parse_number(next_token(in, "objective"));
    } else {
      throw ParseError("unknown solution line '" + tag + "'");
    }
  }
  return x;
}

namespace {

void write_messages(std::ostream& out, const char* tag, const PottsInstance& inst, std::size_t e,
                    std::span<const double> from_u, std::span<const double> from_v) {
  const Edge& edge = inst.edge(e);
  for (std::size_t i = 0; i < from_u.size(); ++i)
    out << tag << ' ' << edge.u << ' ' << edge.v << ' ' << i << ' ' << format_number(from_u[i]) << '\n';
  for (std::size_t i = 0; i < from_v.size(); ++i)
    out << tag << ' ' << edge.v << ' ' << edge.u << ' ' << i << ' ' << format_number(from_v[i]) << '\n';
}

}  // namespace

void write_dual(std::ostream& out, const PottsInstance& inst, const DualSolution& eta) {
  for (std::size_t e = 0; e < eta.num_edges(); ++e)
    write_messages(out, "eta", inst, e, eta.message(e, Side::kFromU), eta.message(e, Side::kFromV));
}

DualSolution read_dual(std::istream& in, const PottsInstance& inst) {
  DualSolution eta(inst.num_edges(), inst.num_labels());
  std::string tag;
  while (in >> tag) {
    if (tag != "eta") throw ParseError("unknown dual line '" + tag + "'");
    const auto u = static_cast<NodeId>(next_integer(in, "node"));
    const auto v = static_cast<NodeId>(next_integer(in, "node"));
    const long long i = next_integer(in, "label");
    const auto e = inst.find_edge(u, v);
    if (!e || i < 0 || i >= inst.num_labels()) throw ParseError("dual line out of range");
    eta.message(*e, side_of(inst.edge(*e), u))[static_cast<std::size_t>(i)] = parse_number(next_token(in, "value"));
  }
  return eta;
}

void write_block_dual(std::ostream& out, const PottsInstance& inst, const BlockDualSolution& delta) {
  for (std::size_t e : delta.edges())
    write_messages(out, "delta", inst, e, delta.message(e, Side::kFromU), delta.message(e, Side::kFromV));
}

void write_verdict(std::ostream& out, const StabilityVerdict& v) {
  out << "stable " << (v.stable ? 1 : 0) << '\n';
  out << "hamming " << v.hamming << '\n';
  if (v.witness) {
    out << "witness";
    for (Label l : *v.witness) out << ' ' << l;
    out << '\n';
  }
}

void write_report(std::ostream& out, const FinderReport& report, int num_nodes) {
  const BlockDecomposition& d = report.final_decomposition;
  const std::vector<std::size_t> owner = d.block_of(num_nodes);
  for (NodeId u = 0; u < num_nodes; ++u) {
    out << "node " << u << " block ";
    if (owner[u] == d.blocks.size()) out << '*';
    else out << owner[u];
    out << " status " << (d.status[owner[u]] == BlockStatus::kStable ? 'S' : 'U') << '\n';
  }
  for (std::size_t t = 0; t < report.iterations.size(); ++t)
    out << "iteration " << t + 1 << " certified_fraction " << format_number(report.iterations[t].certified_fraction)
        << '\n';
}

ReportFile read_report(std::istream& in) {
  ReportFile r;
  std::string tag;
  while (in >> tag) {
    if (tag == "node") {
      const long long u = next_integer(in, "node");
      if (u != static_cast<long long>(r.block.size())) throw ParseError("report nodes must be listed in order");
      expect(in, "block");
      const std::string b = next_token(in, "block");
      r.block.push_back(b == "*" ? -1 : static_cast<int>(parse_number(b)));
      expect(in, "status");
      const std::string s = next_token(in, "status");
      if (s != "S" && s != "U") throw ParseError("bad status '" + s + "'");
      r.stable.push_back(s == "S");
    } else if (tag == "iteration") {
      const auto t = static_cast<int>(next_integer(in, "iteration"));
      expect(in, "certified_fraction");
      r.fractions.emplace_back(t, parse_number(next_token(in, "fraction")));
    } else {
      throw ParseError("unknown report line '" + tag + "'");
    }
  }
  return r;
}

}  // namespace blockstab::io
