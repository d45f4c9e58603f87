#pragma once

#include "eulersparse/colouring.hpp"
#include "eulersparse/toggle.hpp"

namespace eulersparse {

// Structural and spectral certificate for a sparsifier output against the
// graph it came from: degree differences preserved, weights positive,
// Eulerian, and the relative spectral error below epsilon.
struct ErrorCertificate {
    bool eulerian_ok = false;
    bool degrees_ok = false;
    bool weights_ok = false;
    bool error_ok = false;
    std::size_t edges_in = 0;
    std::size_t edges_out = 0;
    double epsilon = 0.0;
    double measured_error = 0.0;
    std::vector<std::string> failures;

    bool pass() const { return eulerian_ok && degrees_ok && weights_ok && error_ok; }
};

ErrorCertificate certify(const DirectedMultigraph& g, const DirectedMultigraph& h, double epsilon);
ErrorCertificate certify(const DirectedMultigraph& g, const RealDigraph& h, double epsilon);

// Exhaustive model of one toggle round: every coin vector is pushed through
// the real round code, so the enumerated outcome space is exactly what the
// seeded round samples from.
struct ToggleOutcome {
    std::vector<bool> coins;  // indexed by cycle draw order
    DirectedMultigraph graph;
    double probability = 0.0;
};

struct ToggleDistribution {
    std::vector<OrientedCycle> cycles;  // draw order
    std::vector<ToggleOutcome> outcomes;
    // Every outcome Laplacian equals the input Laplacian plus the signed sum
    // of the per-cycle changes; max_deviation is the worst entry difference.
    bool matches_cycle_changes = true;
    double max_deviation = 0.0;
    DenseMatrix mean_laplacian;  // probability-weighted; equals the input's
};

// Throws TooLargeError when the round would toggle more than max_cycles
// cycles (the outcome count is exponential in it).
ToggleDistribution brute_force_toggle_distribution(const DirectedMultigraph& g,
                                                   const ToggleConfig& cfg,
                                                   const ShortCycleDecomposer& decomposer,
                                                   std::size_t max_cycles = 10);

// Error quantiles of independent single rounds, against the concentration
// scale sqrt(n * L^2 * log2(n) / m) the stop threshold is built from.
struct ConcentrationProbe {
    std::size_t trials = 0;
    double median = 0.0;
    double q90 = 0.0;
    double q99 = 0.0;
    double worst = 0.0;
    double reference_scale = 0.0;
};

ConcentrationProbe concentration_probe(const DirectedMultigraph& g, const ToggleConfig& cfg,
                                       const ShortCycleDecomposer& decomposer, std::size_t trials,
                                       uint64_t seed);

DenseMatrix dense_from_triplets(Vertex n,
                                const std::vector<std::tuple<Vertex, Vertex, double>>& triplets);

// a ⪯ b up to rounding: smallest eigenvalue of b - a is at least
// -1e-8 * max(||a||, ||b||). min_eig receives that eigenvalue if non-null.
bool check_psd_dominance(const DenseMatrix& a, const DenseMatrix& b, double* min_eig = nullptr);

// Dense host-metric bundle shared by the per-cycle lemma checks: the
// undirectified Laplacian, its pseudoinverse, and the inverse square root.
struct HostMetric {
    DenseMatrix lg;
    DenseMatrix lg_pinv;
    DenseMatrix q;
};

HostMetric make_host_metric(const DirectedMultigraph& g);
HostMetric make_host_metric(const RealDigraph& g);

// PSD bounds for one decomposed cycle of length L, uniform weight w, largest
// edge leverage rho = max_e w * r_e, within a host with undirected Laplacian
// L_G and undirectified cycle Laplacian L_C:
//   - opposing part:      L_S                 ⪯ 1 * L   * rho * L_G
//   - forward part:       L_F^T L_G^+ L_F     ⪯ 2 * L^2 * rho * L_C
//   - full change, both orderings, conjugated by L_G^{+/2}:
//                         X^T L_G^+ X and X L_G^+ X^T ⪯ 8 * L^2 * rho * L_C
// rho is recomputed from lg_pinv so the check is self-consistent with the
// metric it runs in. Each min_eig is of (bound side - checked side).
struct CycleLemmaReport {
    double rho = 0.0;
    std::size_t length = 0;
    bool spart_ok = false;
    bool fpart_ok = false;
    bool bounds_fwd_ok = false;
    bool bounds_rev_ok = false;
    double spart_min_eig = 0.0;
    double fpart_min_eig = 0.0;
    double bounds_fwd_min_eig = 0.0;
    double bounds_rev_min_eig = 0.0;

    bool pass() const { return spart_ok && fpart_ok && bounds_fwd_ok && bounds_rev_ok; }
};

CycleLemmaReport check_cycle_lemmas(const HostMetric& host, const OrientedCycle& c);

// The rescaling the sparse branch relies on: the undirectified integral part
// plus every carried cycle at (1 - |colour|) of its full weight is dominated
// by the undirectified composite.
bool check_rescale_dominance(const SparsifierState& s, double* min_eig = nullptr);

// Materialized second-moment sum of a cycle family (lifted squares) against
// the declared sigma_sq_bound.
struct MomentCheck {
    double declared = 0.0;
    double measured = 0.0;
    bool pass = false;
};

MomentCheck check_moment_bound(const CycleMatrixFamily& family);

}  // namespace eulersparse
