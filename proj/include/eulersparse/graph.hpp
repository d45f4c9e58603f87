#pragma once

#include <cstdint>
#include <vector>

#include "eulersparse/errors.hpp"

namespace eulersparse {

using Vertex = int32_t;
using Weight = uint64_t;
using EdgeId = uint32_t;

// Hard cap on a single edge weight. Weights at or above this are rejected so
// that degree sums and doubling rounds stay comfortably inside uint64.
inline constexpr Weight kMaxEdgeWeight = Weight(1) << 62;
// Above this we keep working but flag the graph; see
// DirectedMultigraph::has_oversized_weights().
inline constexpr Weight kSoftWeightBound = Weight(1) << 40;

struct Edge {
    Vertex tail = 0;
    Vertex head = 0;
    Weight weight = 1;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed multigraph with positive integer weights. Edges are stored in
// insertion order; the index into edges() is the stable edge id that cycle
// decompositions and sparsifier bookkeeping refer to. Parallel and
// antiparallel edges are kept distinct. Self-loops are rejected.
class DirectedMultigraph {
public:
    DirectedMultigraph() = default;
    explicit DirectedMultigraph(Vertex n);

    static DirectedMultigraph from_edges(Vertex n, std::vector<Edge> edges);

    Vertex vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId id) const { return edges_.at(id); }

    EdgeId add_edge(Vertex tail, Vertex head, Weight weight);

    // True if any edge weight exceeds the soft bound 2^40. Beyond that the
    // doubling done by the sparsifiers erodes the headroom below 2^62; the
    // CLI warns but computations proceed.
    bool has_oversized_weights() const { return oversized_; }

    friend bool operator==(const DirectedMultigraph& a, const DirectedMultigraph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    Vertex n_ = 0;
    std::vector<Edge> edges_;
    bool oversized_ = false;
};

// Weighted out/in degree per vertex.
struct DegreeVector {
    std::vector<uint64_t> out;
    std::vector<uint64_t> in;
};

DegreeVector weighted_degrees(const DirectedMultigraph& g);

// out-degree minus in-degree per vertex; all zero iff Eulerian.
std::vector<int64_t> degree_difference(const DirectedMultigraph& g);

bool is_eulerian(const DirectedMultigraph& g);

// Splits every edge into one edge per set bit of its weight, so all weights
// in the result are powers of two. The directed Laplacian is preserved
// exactly; edge count grows by at most a factor of 62.
DirectedMultigraph binary_decompose(const DirectedMultigraph& g);

// One uniform-weight slice of a graph whose weights are all powers of two.
struct WeightLevel {
    int exponent = 0;                    // edges in subgraph all weigh 2^exponent
    DirectedMultigraph subgraph;
    std::vector<EdgeId> source_edge_ids; // subgraph edge i came from this id in the parent
};

// Requires every weight to be a power of two (NonPowerOfTwoWeightError
// otherwise). Levels are returned in increasing exponent order and only for
// exponents that actually occur.
std::vector<WeightLevel> partition_by_weight(const DirectedMultigraph& g);

// Inverse of partition_by_weight up to edge order: the union of all levels.
DirectedMultigraph reassemble(Vertex n, const std::vector<WeightLevel>& levels);

struct RandomEulerianParams {
    Vertex n = 0;            // >= 3
    int cycle_count = 1;     // >= 1
    int max_cycle_len = 8;   // >= 3; clamped to n
    int max_weight_exp = 0;  // weights drawn as 2^u, u uniform in [0, max_weight_exp]
};

// Union of cycle_count directed cycles on random vertex subsets, each
// consistently oriented, so the result is Eulerian by construction. Later
// cycles are anchored at already-used vertices and prefer untouched ones,
// which keeps the edge support connected (vertices never touched stay
// isolated). Deterministic given the seed.
DirectedMultigraph generate_random_eulerian(const RandomEulerianParams& params, uint64_t seed);

// Real-weighted directed graph. Only the colouring sparsifier produces these
// (its intermediate states carry fractional cycle weights); everything else
// in the library speaks DirectedMultigraph.
struct RealEdge {
    Vertex tail = 0;
    Vertex head = 0;
    double weight = 1.0;

    friend bool operator==(const RealEdge&, const RealEdge&) = default;
};

struct RealDigraph {
    Vertex n = 0;
    std::vector<RealEdge> edges;

    friend bool operator==(const RealDigraph&, const RealDigraph&) = default;
};

RealDigraph to_real(const DirectedMultigraph& g);

std::vector<double> degree_difference(const RealDigraph& g);

// Eulerian up to |out - in| <= tol * max(1, max weighted degree).
bool is_eulerian(const RealDigraph& g, double tol = 1e-9);

}  // namespace eulersparse
