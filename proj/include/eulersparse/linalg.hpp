#pragma once

#include <Eigen/Dense>

#include "eulersparse/graph.hpp"

namespace eulersparse {

using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;

// Eigendecomposition of a symmetric matrix plus the cutoff below which
// eigenvalues are treated as exact zeros (rank decisions).
struct SpectralFactorization {
    DenseVector eigenvalues;   // ascending
    DenseMatrix eigenvectors;  // columns
    double rank_tolerance = 0.0;
};

// Relative tolerances used across these kernels.
inline constexpr double kSymmetryTol = 1e-10;   // ||A - A^T|| vs ||A||, entrywise
inline constexpr double kRankTol = 1e-10;       // eigenvalue <= kRankTol * lambda_max -> zero
inline constexpr double kPSDTol = 1e-10;        // eigenvalue >= -kPSDTol * lambda_max accepted

// Directed Laplacian D - A^T (column sums are zero). Accumulates parallel
// edges. For an Eulerian graph the row sums vanish as well.
DenseMatrix laplacian_directed(const RealDigraph& g);
DenseMatrix laplacian_directed(const DirectedMultigraph& g);

// Laplacian of the undirectification: every directed edge contributes half
// its weight as an undirected edge. Symmetric, PSD, ones in the kernel.
DenseMatrix laplacian_undirected(const RealDigraph& g);
DenseMatrix laplacian_undirected(const DirectedMultigraph& g);

SpectralFactorization spectral_factorize(const DenseMatrix& sym);

// A^+ and A^{+/2} for symmetric PSD input. Throws NotSymmetricError /
// NotPSDError when the input violates the contract beyond tolerance.
DenseMatrix pseudo_inverse(const DenseMatrix& a);
DenseMatrix pseudo_inverse_sqrt(const DenseMatrix& a);

// Largest singular value.
double operator_norm(const DenseMatrix& a);

// [[0, A], [A^T, 0]]: symmetric, same operator norm as A, Frobenius norm
// scaled by sqrt(2).
DenseMatrix hermitian_lift(const DenseMatrix& a);

// Connected components of the undirectification. Vertices with no incident
// edges count as singleton components.
int connected_components(const RealDigraph& g);

// Effective resistance across each edge's endpoints in the undirectification.
// Requires the edge support to live in a single component (DisconnectedError
// otherwise); untouched vertices are allowed and simply sit in the kernel.
std::vector<double> effective_resistances(const RealDigraph& g);
std::vector<double> effective_resistances(const DirectedMultigraph& g);

// Randomized sketch of the same quantities (Johnson-Lindenstrauss probes of
// the weighted incidence image). Drop-in for effective_resistances; accuracy
// is certified against the exact routine in the test suite. probe_scale
// multiplies the default probe count.
std::vector<double> effective_resistances_sketch(const RealDigraph& g, uint64_t seed,
                                                 double probe_scale = 1.0);

// || L_G^{+/2} (L_h - L_g) L_G^{+/2} || where L_G is the undirected Laplacian
// of g's undirectification and L_h, L_g are directed Laplacians. This is the
// sparsification error of h with respect to g; it is not symmetric in its
// arguments.
double error_metric(const RealDigraph& g, const RealDigraph& h);
double error_metric(const DirectedMultigraph& g, const DirectedMultigraph& h);
double error_metric(const DirectedMultigraph& g, const RealDigraph& h);

}  // namespace eulersparse
