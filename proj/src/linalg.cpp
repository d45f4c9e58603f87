#include "eulersparse/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <numeric>

#include "eulersparse/rng.hpp"

namespace eulersparse {

DenseMatrix laplacian_directed(const RealDigraph& g) {
    DenseMatrix l = DenseMatrix::Zero(g.n, g.n);
    for (const RealEdge& e : g.edges) {
        l(e.tail, e.tail) += e.weight;
        l(e.head, e.tail) -= e.weight;
    }
    return l;
}

DenseMatrix laplacian_directed(const DirectedMultigraph& g) {
    return laplacian_directed(to_real(g));
}

DenseMatrix laplacian_undirected(const RealDigraph& g) {
    DenseMatrix l = DenseMatrix::Zero(g.n, g.n);
    for (const RealEdge& e : g.edges) {
        double h = 0.5 * e.weight;
        l(e.tail, e.tail) += h;
        l(e.head, e.head) += h;
        l(e.tail, e.head) -= h;
        l(e.head, e.tail) -= h;
    }
    return l;
}

DenseMatrix laplacian_undirected(const DirectedMultigraph& g) {
    return laplacian_undirected(to_real(g));
}

static void require_symmetric(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw NotSymmetricError("matrix is not square");
    double scale = a.cwiseAbs().maxCoeff();
    double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol * std::max(scale, 1.0))
        throw NotSymmetricError("matrix is not symmetric (max asymmetry " +
                                std::to_string(asym) + ")");
}

SpectralFactorization spectral_factorize(const DenseMatrix& sym) {
    require_symmetric(sym);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (sym + sym.transpose()));
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed to converge");
    SpectralFactorization f;
    f.eigenvalues = es.eigenvalues();
    f.eigenvectors = es.eigenvectors();
    double lmax = f.eigenvalues.size() ? f.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    f.rank_tolerance = kRankTol * lmax;
    return f;
}

static DenseMatrix apply_spectral(const DenseMatrix& a, double (*fn)(double)) {
    SpectralFactorization f = spectral_factorize(a);
    double lmax = f.eigenvalues.size() ? f.eigenvalues.maxCoeff() : 0.0;
    if (f.eigenvalues.size() && f.eigenvalues.minCoeff() < -kPSDTol * std::max(lmax, 1.0))
        throw NotPSDError("matrix has eigenvalue " + std::to_string(f.eigenvalues.minCoeff()) +
                          " below the PSD tolerance");
    DenseVector d = f.eigenvalues;
    for (Eigen::Index i = 0; i < d.size(); ++i)
        d[i] = (d[i] <= f.rank_tolerance) ? 0.0 : fn(d[i]);
    return f.eigenvectors * d.asDiagonal() * f.eigenvectors.transpose();
}

DenseMatrix pseudo_inverse(const DenseMatrix& a) {
    return apply_spectral(a, +[](double x) { return 1.0 / x; });
}

DenseMatrix pseudo_inverse_sqrt(const DenseMatrix& a) {
    return apply_spectral(a, +[](double x) { return 1.0 / std::sqrt(x); });
}

double operator_norm(const DenseMatrix& a) {
    if (a.size() == 0) return 0.0;
    if (a.rows() > 32 || a.cols() > 32) {
        Eigen::BDCSVD<DenseMatrix> svd(a);
        return svd.singularValues()(0);
    }
    Eigen::JacobiSVD<DenseMatrix> svd(a);
    return svd.singularValues()(0);
}

DenseMatrix hermitian_lift(const DenseMatrix& a) {
    const Eigen::Index r = a.rows(), c = a.cols();
    DenseMatrix l = DenseMatrix::Zero(r + c, r + c);
    l.topRightCorner(r, c) = a;
    l.bottomLeftCorner(c, r) = a.transpose();
    return l;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

// Throws unless all edges live in one component. Isolated vertices are fine.
void require_connected_support(const RealDigraph& g) {
    if (g.edges.empty()) return;
    UnionFind uf(g.n);
    for (const RealEdge& e : g.edges) uf.unite(e.tail, e.head);
    int root = uf.find(g.edges.front().tail);
    for (const RealEdge& e : g.edges)
        if (uf.find(e.tail) != root)
            throw DisconnectedError("edge support spans multiple components");
}

}  // namespace

int connected_components(const RealDigraph& g) {
    UnionFind uf(g.n);
    for (const RealEdge& e : g.edges) uf.unite(e.tail, e.head);
    int count = 0;
    for (Vertex v = 0; v < g.n; ++v)
        if (uf.find(v) == v) ++count;
    return count;
}

std::vector<double> effective_resistances(const RealDigraph& g) {
    require_connected_support(g);
    DenseMatrix lp = pseudo_inverse(laplacian_undirected(g));
    std::vector<double> r;
    r.reserve(g.edges.size());
    for (const RealEdge& e : g.edges)
        r.push_back(lp(e.tail, e.tail) + lp(e.head, e.head) - 2.0 * lp(e.tail, e.head));
    return r;
}

std::vector<double> effective_resistances(const DirectedMultigraph& g) {
    return effective_resistances(to_real(g));
}

std::vector<double> effective_resistances_sketch(const RealDigraph& g, uint64_t seed,
                                                 double probe_scale) {
    require_connected_support(g);
    const auto m = static_cast<Eigen::Index>(g.edges.size());
    if (m == 0) return {};
    // r_e = || W^{1/2} B L^+ b_e ||^2 with B the signed incidence of the
    // undirectification; project the m-dimensional image down to k probes.
    // k is sized for ~20% distortion, comfortably inside the 1.5x contract.
    const double delta = 0.2;
    const auto k = static_cast<Eigen::Index>(
        std::ceil(probe_scale * 16.0 * std::log(std::max<double>(static_cast<double>(m), 2.0)) /
                  (delta * delta)));
    DenseMatrix lp = pseudo_inverse(laplacian_undirected(g));
    Rng rng(seed);
    // z = Q W^{1/2} B lp, assembled row by row without materializing B.
    DenseMatrix z = DenseMatrix::Zero(k, g.n);
    for (Eigen::Index j = 0; j < m; ++j) {
        const RealEdge& e = g.edges[static_cast<std::size_t>(j)];
        double sw = std::sqrt(0.5 * e.weight);
        Eigen::RowVectorXd be_lp = sw * (lp.row(e.tail) - lp.row(e.head));
        for (Eigen::Index i = 0; i < k; ++i)
            z.row(i) += (rand_bit(rng) ? 1.0 : -1.0) * be_lp;
    }
    z /= std::sqrt(static_cast<double>(k));
    std::vector<double> r;
    r.reserve(g.edges.size());
    for (const RealEdge& e : g.edges)
        r.push_back((z.col(e.tail) - z.col(e.head)).squaredNorm());
    return r;
}

double error_metric(const RealDigraph& g, const RealDigraph& h) {
    if (g.n != h.n)
        throw DimensionMismatchError("graphs have different vertex counts: " +
                                     std::to_string(g.n) + " vs " + std::to_string(h.n));
    require_connected_support(g);
    DenseMatrix p = pseudo_inverse_sqrt(laplacian_undirected(g));
    DenseMatrix diff = laplacian_directed(h) - laplacian_directed(g);
    return operator_norm(p * diff * p);
}

double error_metric(const DirectedMultigraph& g, const DirectedMultigraph& h) {
    return error_metric(to_real(g), to_real(h));
}

double error_metric(const DirectedMultigraph& g, const RealDigraph& h) {
    return error_metric(to_real(g), h);
}

}  // namespace eulersparse
