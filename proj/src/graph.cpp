#include "lrsdp/graph.hpp"

#include <algorithm>
#include <fstream>
#include <ios>
#include <sstream>

namespace lrsdp {

GraphFormat graph_format_from_string(const std::string& name) {
  if (name == "edge-list") return GraphFormat::kEdgeList;
  if (name == "matrix-market" || name == "mm" ||
      name == "matrix-market-pattern")
    return GraphFormat::kMatrixMarket;
  if (name == "gset") return GraphFormat::kGset;
  throw InputError("unknown graph format '" + name + "'");
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, long line,
                             const std::string& what) {
  throw InputError(path + ":" + std::to_string(line) + ": " + what);
}

struct EdgeAccumulator {
  std::vector<std::pair<Index, Index>> edges;
  Index max_vertex = 0;
  int self_loops = 0;

  void add(Index u, Index v) {
    max_vertex = std::max({max_vertex, u, v});
    if (u == v) {
      ++self_loops;
      return;
    }
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
  }

  Graph finish(Index n_hint) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Graph g;
    g.n_vertices = std::max(n_hint, max_vertex + 1);
    g.edges = std::move(edges);
    g.dropped_self_loops = self_loops;
    if (g.n_vertices <= 0 || g.edges.empty())
      throw InputError("graph is empty");
    return g;
  }
};

}  // namespace

Graph load_graph(const std::string& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in)
    throw std::ios_base::failure("cannot open graph file '" + path + "'");

  EdgeAccumulator acc;
  std::string line;
  long lineno = 0;
  Index n_hint = 0;
  bool header_read = false;

  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const char c = line[first];
    if (c == '#') continue;
    if (format == GraphFormat::kMatrixMarket && c == '%') {
      if (line.find("%%MatrixMarket") != std::string::npos &&
          line.find("pattern") == std::string::npos)
        parse_fail(path, lineno, "expected a pattern matrix");
      continue;
    }

    std::istringstream ss(line.substr(first));
    if (!header_read &&
        (format == GraphFormat::kGset || format == GraphFormat::kMatrixMarket)) {
      long n = 0, n2 = 0, nnz = 0;
      if (format == GraphFormat::kGset) {
        if (!(ss >> n >> nnz)) parse_fail(path, lineno, "bad GSET header");
      } else {
        if (!(ss >> n >> n2 >> nnz))
          parse_fail(path, lineno, "bad Matrix Market size line");
        if (n != n2) parse_fail(path, lineno, "adjacency matrix must be square");
      }
      if (n <= 0) parse_fail(path, lineno, "non-positive vertex count");
      n_hint = n;
      header_read = true;
      continue;
    }

    long u = 0, v = 0;
    if (!(ss >> u >> v)) parse_fail(path, lineno, "expected two vertex indices");
    if (format == GraphFormat::kGset) {
      double w;
      ss >> w;  // optional weight, ignored
    }
    if (u < 1 || v < 1) parse_fail(path, lineno, "vertex indices are 1-based");
    if (n_hint > 0 && (u > n_hint || v > n_hint))
      parse_fail(path, lineno, "vertex index exceeds declared count");
    acc.add(u - 1, v - 1);
  }
  return acc.finish(n_hint);
}

Graph make_cycle(int n) {
  require(n >= 3, "cycle graph needs n >= 3");
  Graph g;
  g.n_vertices = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  g.edges.emplace_back(0, n - 1);
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

Graph make_petersen() {
  Graph g;
  g.n_vertices = 10;
  for (int i = 0; i < 5; ++i) {
    g.edges.emplace_back(i, (i + 1) % 5);          // outer pentagon
    g.edges.emplace_back(i, i + 5);                // spokes
    g.edges.emplace_back(i + 5, (i + 2) % 5 + 5);  // inner pentagram
  }
  for (auto& e : g.edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

Graph make_hypercube(int d) {
  require(d >= 1 && d < 26, "hypercube dimension out of range");
  Graph g;
  const Index n = Index(1) << d;
  g.n_vertices = n;
  g.edges.reserve(static_cast<std::size_t>(n) * d / 2);
  for (Index v = 0; v < n; ++v)
    for (int bit = 0; bit < d; ++bit) {
      const Index u = v ^ (Index(1) << bit);
      if (v < u) g.edges.emplace_back(v, u);
    }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

}  // namespace lrsdp
