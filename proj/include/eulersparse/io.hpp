#pragma once

#include <iosfwd>
#include <string>

#include "eulersparse/graph.hpp"

namespace eulersparse {

// TSV exchange format for integer-weighted graphs:
//
//   # directed-eulerian n=<n> m=<m>
//   tail<TAB>head<TAB>weight
//   ...
//
// Round-trips exactly (vertex ids and weights are written in decimal, edge
// order is preserved).
void write_tsv(std::ostream& os, const DirectedMultigraph& g);
void write_tsv_file(const std::string& path, const DirectedMultigraph& g);
DirectedMultigraph read_tsv(std::istream& is);
DirectedMultigraph read_tsv_file(const std::string& path);

// JSON format for real-weighted graphs (colouring sparsifier output):
//   {"format": "directed-eulerian-real", "n": ..., "edges": [[tail, head, w], ...]}
void write_json_graph_file(const std::string& path, const RealDigraph& g);
std::string json_graph_string(const RealDigraph& g);
RealDigraph read_json_graph_file(const std::string& path);

// Loads either format, picking by content (TSV header vs JSON object), and
// converts integral graphs to real weights.
RealDigraph load_real_graph(const std::string& path);

}  // namespace eulersparse
