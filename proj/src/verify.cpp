#include "eulersparse/verify.hpp"

#include <algorithm>
#include <cmath>

#include "eulersparse/rng.hpp"

namespace eulersparse {

namespace {

void fill_error(ErrorCertificate& cert, const RealDigraph& g, const RealDigraph& h,
                double epsilon) {
    cert.epsilon = epsilon;
    cert.measured_error = error_metric(g, h);
    cert.error_ok = cert.measured_error <= epsilon;
    if (!cert.error_ok)
        cert.failures.push_back("spectral error " + std::to_string(cert.measured_error) +
                                " above target " + std::to_string(epsilon));
}

}  // namespace

ErrorCertificate certify(const DirectedMultigraph& g, const DirectedMultigraph& h,
                         double epsilon) {
    if (g.vertex_count() != h.vertex_count())
        throw DimensionMismatchError("certify: vertex counts differ");
    ErrorCertificate cert;
    cert.edges_in = g.edge_count();
    cert.edges_out = h.edge_count();
    cert.eulerian_ok = is_eulerian(h);
    if (!cert.eulerian_ok) cert.failures.push_back("output is not Eulerian");
    cert.degrees_ok = degree_difference(g) == degree_difference(h);
    if (!cert.degrees_ok) cert.failures.push_back("degree differences changed");
    cert.weights_ok = true;  // integral weights are positive by construction
    fill_error(cert, to_real(g), to_real(h), epsilon);
    return cert;
}

ErrorCertificate certify(const DirectedMultigraph& g, const RealDigraph& h, double epsilon) {
    if (g.vertex_count() != h.n)
        throw DimensionMismatchError("certify: vertex counts differ");
    ErrorCertificate cert;
    cert.edges_in = g.edge_count();
    cert.edges_out = h.edges.size();
    cert.eulerian_ok = is_eulerian(h);
    if (!cert.eulerian_ok) cert.failures.push_back("output is not Eulerian");

    std::vector<int64_t> want = degree_difference(g);
    std::vector<double> got = degree_difference(h);
    double scale = 1.0;
    for (const RealEdge& e : h.edges) scale = std::max(scale, std::abs(e.weight));
    cert.degrees_ok = true;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (std::abs(got[v] - static_cast<double>(want[v])) > 1e-9 * scale) {
            cert.degrees_ok = false;
            cert.failures.push_back("degree difference changed at vertex " + std::to_string(v));
            break;
        }

    cert.weights_ok = true;
    for (const RealEdge& e : h.edges)
        if (!(e.weight > 0.0)) {
            cert.weights_ok = false;
            cert.failures.push_back("non-positive output weight " + std::to_string(e.weight));
            break;
        }
    fill_error(cert, to_real(g), h, epsilon);
    return cert;
}

ToggleDistribution brute_force_toggle_distribution(const DirectedMultigraph& g,
                                                   const ToggleConfig& cfg,
                                                   const ShortCycleDecomposer& decomposer,
                                                   std::size_t max_cycles) {
    std::vector<double> res = effective_resistances(g);

    ToggleDistribution dist;
    // Dry run: learn the cycles and their draw order.
    sparsify_once_with_coins(
        g, res, cfg, decomposer, [](std::size_t, const OrientedCycle&) { return true; },
        &dist.cycles);
    if (dist.cycles.size() > max_cycles)
        throw TooLargeError("round toggles " + std::to_string(dist.cycles.size()) +
                            " cycles; enumeration is capped at " + std::to_string(max_cycles));

    const Vertex n = g.vertex_count();
    const DenseMatrix base = laplacian_directed(g);
    std::vector<DenseMatrix> changes;
    changes.reserve(dist.cycles.size());
    for (const OrientedCycle& c : dist.cycles)
        changes.push_back(dense_from_triplets(n, laplacian_change_triplets(c)));

    const std::size_t k = dist.cycles.size();
    const double prob = std::ldexp(1.0, -static_cast<int>(k));
    const double tol = 1e-12 * std::max(1.0, base.cwiseAbs().maxCoeff());
    dist.mean_laplacian = DenseMatrix::Zero(n, n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        ToggleOutcome out;
        out.coins.resize(k);
        for (std::size_t i = 0; i < k; ++i) out.coins[i] = (mask >> i) & 1;
        SparsifyOnceResult round = sparsify_once_with_coins(
            g, res, cfg, decomposer,
            [&](std::size_t i, const OrientedCycle&) { return out.coins[i]; });
        out.graph = std::move(round.graph);
        out.probability = prob;

        DenseMatrix expected = base;
        for (std::size_t i = 0; i < k; ++i) expected += (out.coins[i] ? 1.0 : -1.0) * changes[i];
        DenseMatrix actual = laplacian_directed(out.graph);
        double dev = (expected - actual).cwiseAbs().maxCoeff();
        dist.max_deviation = std::max(dist.max_deviation, dev);
        if (dev > tol) dist.matches_cycle_changes = false;
        dist.mean_laplacian += prob * actual;
        dist.outcomes.push_back(std::move(out));
    }
    return dist;
}

ConcentrationProbe concentration_probe(const DirectedMultigraph& g, const ToggleConfig& cfg,
                                       const ShortCycleDecomposer& decomposer, std::size_t trials,
                                       uint64_t seed) {
    if (trials == 0) return {};  // nothing sampled, all-zero report
    std::vector<double> res = effective_resistances(g);
    std::vector<double> errors;
    errors.reserve(trials);
    int max_len = 1;
    for (std::size_t t = 0; t < trials; ++t) {
        ToggleConfig one = cfg;
        one.seed = derive_seed(seed, t);
        SparsifyOnceResult round = sparsify_once(g, res, one, decomposer);
        max_len = std::max(max_len, round.report.certificate.max_length);
        errors.push_back(error_metric(g, round.graph));
    }
    std::sort(errors.begin(), errors.end());
    auto at = [&](double q) {
        return errors[static_cast<std::size_t>(q * static_cast<double>(trials - 1))];
    };
    ConcentrationProbe probe;
    probe.trials = trials;
    probe.median = at(0.5);
    probe.q90 = at(0.9);
    probe.q99 = at(0.99);
    probe.worst = errors.back();
    const double n = static_cast<double>(g.vertex_count());
    const double m = static_cast<double>(std::max<std::size_t>(g.edge_count(), 1));
    const double len = static_cast<double>(max_len);
    probe.reference_scale = std::sqrt(n * len * len * std::log2(std::max(n, 2.0)) / m);
    return probe;
}

DenseMatrix dense_from_triplets(Vertex n,
                                const std::vector<std::tuple<Vertex, Vertex, double>>& triplets) {
    DenseMatrix a = DenseMatrix::Zero(n, n);
    for (const auto& [r, c, v] : triplets) a(r, c) += v;
    return a;
}

bool check_psd_dominance(const DenseMatrix& a, const DenseMatrix& b, double* min_eig) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatchError("psd dominance needs equal shapes");
    SpectralFactorization f = spectral_factorize(DenseMatrix(b - a));
    double smallest = f.eigenvalues.size() ? f.eigenvalues.minCoeff() : 0.0;
    if (min_eig) *min_eig = smallest;
    double scale = std::max(operator_norm(a), operator_norm(b));
    return smallest >= -1e-8 * scale;
}

HostMetric make_host_metric(const DirectedMultigraph& g) { return make_host_metric(to_real(g)); }

HostMetric make_host_metric(const RealDigraph& g) {
    HostMetric m;
    m.lg = laplacian_undirected(g);
    m.lg_pinv = pseudo_inverse(m.lg);
    m.q = pseudo_inverse_sqrt(m.lg);
    return m;
}

CycleLemmaReport check_cycle_lemmas(const HostMetric& host, const OrientedCycle& c) {
    CycleLemmaReport rep;
    rep.length = c.length();
    const double w = static_cast<double>(c.weight);
    const double len = static_cast<double>(rep.length);
    const auto n = static_cast<Vertex>(host.lg.rows());

    for (const DirEdge& e : c.original) {
        double r = host.lg_pinv(e.tail, e.tail) + host.lg_pinv(e.head, e.head) -
                   2.0 * host.lg_pinv(e.tail, e.head);
        rep.rho = std::max(rep.rho, w * r);
    }

    DenseMatrix spart = DenseMatrix::Zero(n, n);
    DenseMatrix cycle_u = DenseMatrix::Zero(n, n);  // undirectified cycle: w/2 per edge
    for (std::size_t j = 0; j < c.length(); ++j) {
        Vertex u = c.original[j].tail, v = c.original[j].head;
        double h = 0.5 * w;
        cycle_u(u, u) += h;
        cycle_u(v, v) += h;
        cycle_u(u, v) -= h;
        cycle_u(v, u) -= h;
        if (!c.reversed[j]) continue;
        spart(u, u) += w;
        spart(v, v) += w;
        spart(u, v) -= w;
        spart(v, u) -= w;
    }
    DenseMatrix fpart = DenseMatrix::Zero(n, n);
    for (const DirEdge& e : c.forward_edges()) {
        fpart(e.tail, e.tail) += w;
        fpart(e.head, e.tail) -= w;
    }
    DenseMatrix change = dense_from_triplets(n, laplacian_change_triplets(c));

    rep.spart_ok = check_psd_dominance(spart, len * rep.rho * host.lg, &rep.spart_min_eig);
    DenseMatrix fquad = fpart.transpose() * host.lg_pinv * fpart;
    rep.fpart_ok =
        check_psd_dominance(fquad, 2.0 * len * len * rep.rho * cycle_u, &rep.fpart_min_eig);
    const DenseMatrix rhs =
        host.q * (8.0 * len * len * rep.rho * cycle_u) * host.q;
    DenseMatrix fwd = host.q * (change.transpose() * host.lg_pinv * change) * host.q;
    DenseMatrix rev = host.q * (change * host.lg_pinv * change.transpose()) * host.q;
    rep.bounds_fwd_ok = check_psd_dominance(fwd, rhs, &rep.bounds_fwd_min_eig);
    rep.bounds_rev_ok = check_psd_dominance(rev, rhs, &rep.bounds_rev_min_eig);
    return rep;
}

bool check_rescale_dominance(const SparsifierState& s, double* min_eig) {
    DenseMatrix lhs = laplacian_undirected(s.g);
    const Vertex n = s.g.vertex_count();
    for (std::size_t i = 0; i < s.bar.cycles.size(); ++i) {
        const OrientedCycle& c = s.bar.cycles[i];
        double factor = 1.0 - std::abs(s.bar.colours[i]);
        double half = 0.5 * factor * static_cast<double>(c.weight);
        for (const DirEdge& e : c.original) {
            lhs(e.tail, e.tail) += half;
            lhs(e.head, e.head) += half;
            lhs(e.tail, e.head) -= half;
            lhs(e.head, e.tail) -= half;
        }
    }
    DenseMatrix rhs = laplacian_undirected(composite_graph(s));
    (void)n;
    return check_psd_dominance(lhs, rhs, min_eig);
}

MomentCheck check_moment_bound(const CycleMatrixFamily& family) {
    MomentCheck mc;
    mc.declared = family.sigma_sq_bound();
    const auto n = static_cast<Eigen::Index>(family.vertex_count());
    DenseMatrix top = DenseMatrix::Zero(n, n);
    DenseMatrix bottom = DenseMatrix::Zero(n, n);
    for (std::size_t i = 0; i < family.size(); ++i) {
        DenseMatrix b = family.core(i);
        top += b * b.transpose();
        bottom += b.transpose() * b;
    }
    mc.measured = std::max(operator_norm(top), operator_norm(bottom));
    mc.pass = mc.measured <= mc.declared * (1.0 + 1e-9) + 1e-12;
    return mc;
}

}  // namespace eulersparse
