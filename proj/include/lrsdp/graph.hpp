#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lrsdp/types.hpp"

namespace lrsdp {

// Simple undirected graph; vertices are 0-based internally, 1-based in files.
struct Graph {
  Index n_vertices = 0;
  std::vector<std::pair<Index, Index>> edges;  // i < j, sorted, deduplicated
  int dropped_self_loops = 0;
};

enum class GraphFormat { kEdgeList, kMatrixMarket, kGset };

GraphFormat graph_format_from_string(const std::string& name);

// Edge list: "u v" per line, 1-based, '#' comments.
// Matrix Market: "pattern symmetric" coordinate header.
// GSET: header "n m", then "u v w" lines (weights ignored).
Graph load_graph(const std::string& path, GraphFormat format);

Graph make_cycle(int n);
Graph make_petersen();
// d-dimensional hypercube: 2^d vertices, edges between words at Hamming
// distance one (the Hamming graph H(d,2)).
Graph make_hypercube(int d);

}  // namespace lrsdp
