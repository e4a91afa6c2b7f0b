#include "stepanov/jets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stepanov/taylor.hpp"

namespace stepanov {

namespace {

using PolyMat = std::vector<std::vector<TaylorPoly>>;

void check_point(const MetricManifest& m, const Eigen::VectorXd& p) {
    if (p.size() != m.dim) throw DomainError("point dimension mismatch");
    if (!m.in_domain(p)) throw DomainError("point outside chart domain of '" + m.name + "'");
}

MetricJet jet_from_polys(int dim, const Eigen::VectorXd& p, const PolyMat& g_polys, int order) {
    MetricJet jet;
    jet.dim = dim;
    jet.order = order;
    jet.point = p;
    jet.g = Tensor(dim, {Variance::Co, Variance::Co});
    std::vector<int> alpha(static_cast<std::size_t>(dim), 0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) jet.g({i, j}) = g_polys[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value();
    if (order >= 1) {
        jet.dg = Tensor(dim, {Variance::Co, Variance::Co, Variance::Co});
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                for (int k = 0; k < dim; ++k) {
                    std::fill(alpha.begin(), alpha.end(), 0);
                    alpha[static_cast<std::size_t>(k)] += 1;
                    jet.dg({i, j, k}) = g_polys[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].partial(alpha);
                }
    }
    if (order >= 2) {
        jet.d2g = Tensor(dim, std::vector<Variance>(4, Variance::Co));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                for (int k = 0; k < dim; ++k)
                    for (int l = 0; l < dim; ++l) {
                        std::fill(alpha.begin(), alpha.end(), 0);
                        alpha[static_cast<std::size_t>(k)] += 1;
                        alpha[static_cast<std::size_t>(l)] += 1;
                        jet.d2g({i, j, k, l}) = g_polys[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].partial(alpha);
                    }
    }
    if (order >= 3) {
        jet.d3g = Tensor(dim, std::vector<Variance>(5, Variance::Co));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                for (int k = 0; k < dim; ++k)
                    for (int l = 0; l < dim; ++l)
                        for (int q = 0; q < dim; ++q) {
                            std::fill(alpha.begin(), alpha.end(), 0);
                            alpha[static_cast<std::size_t>(k)] += 1;
                            alpha[static_cast<std::size_t>(l)] += 1;
                            alpha[static_cast<std::size_t>(q)] += 1;
                            jet.d3g({i, j, k, l, q}) =
                                g_polys[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].partial(alpha);
                        }
    }
    double det = jet.g.as_matrix().determinant();
    if (std::abs(det) <= kDegeneracyFloor)
        throw DegenerateMetricError("metric is degenerate at the requested point (|det g| = " +
                                    std::to_string(std::abs(det)) + ")");
    return jet;
}

PointJets expression_jets(const MetricManifest& m, const Eigen::VectorXd& p, int order) {
    const int n = m.dim;
    std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
    PolyMat polys(static_cast<std::size_t>(n),
                  std::vector<TaylorPoly>(static_cast<std::size_t>(n), TaylorPoly::constant(n, order, 0.0)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            auto it = m.metric.find({i, j});
            if (it != m.metric.end()) {
                TaylorPoly tp = it->second.eval_taylor(m.coords, pt, order);
                polys[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = tp;
                polys[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = tp;
            }
        }
    PointJets out;
    out.metric = jet_from_polys(n, p, polys, order);
    if (!m.structure.empty()) {
        StructureJet sj;
        sj.F = Tensor(n, {Variance::Contra, Variance::Co});
        sj.dF = Tensor(n, {Variance::Contra, Variance::Co, Variance::Co});
        for (const auto& [key, expr] : m.structure) {
            TaylorPoly tp = expr.eval_taylor(m.coords, pt, 1);
            sj.F({key.first, key.second}) = tp.value();
            std::vector<int> alpha(static_cast<std::size_t>(n), 0);
            for (int k = 0; k < n; ++k) {
                std::fill(alpha.begin(), alpha.end(), 0);
                alpha[static_cast<std::size_t>(k)] = 1;
                sj.dF({key.first, key.second, k}) = tp.partial(alpha);
            }
        }
        out.structure = std::move(sj);
    }
    return out;
}

} // namespace

Tensor canonical_structure(int dim) {
    if (dim % 2 != 0) throw StructuralError("canonical structure requires even dimension");
    const int m = dim / 2;
    Tensor F(dim, {Variance::Contra, Variance::Co});
    for (int a = 0; a < m; ++a) {
        F({m + a, a}) = 1.0;  // F(dx^a) = dy^a
        F({a, m + a}) = -1.0; // F(dy^a) = -dx^a
    }
    return F;
}

PointJets potential_metric_jet(const Expression& K, const std::vector<std::string>& coords,
                               const Eigen::VectorXd& p, int order) {
    const int n = static_cast<int>(coords.size());
    if (n % 2 != 0) throw StructuralError("potential source requires even dimension");
    const int m = n / 2;
    std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
    TaylorPoly Kp = K.eval_taylor(coords, pt, order + 2);

    // second partials of K as polynomials of degree `order`
    PolyMat K2(static_cast<std::size_t>(n),
               std::vector<TaylorPoly>(static_cast<std::size_t>(n), TaylorPoly::constant(n, order, 0.0)));
    for (int a = 0; a < n; ++a) {
        TaylorPoly da = Kp.derivative(a);
        for (int b = a; b < n; ++b) {
            TaylorPoly dab = da.derivative(b);
            K2[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = dab;
            K2[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = dab;
        }
    }

    // real form of the complex Hessian d^2 K / dz^a dzbar^b:
    //   g_{x^a x^b} = g_{y^a y^b} = (K_{x^a x^b} + K_{y^a y^b}) / 4
    //   g_{x^a y^b} =               (K_{x^a y^b} - K_{y^a x^b}) / 4
    PolyMat g(static_cast<std::size_t>(n),
              std::vector<TaylorPoly>(static_cast<std::size_t>(n), TaylorPoly::constant(n, order, 0.0)));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            TaylorPoly diag = (K2[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +
                               K2[static_cast<std::size_t>(m + a)][static_cast<std::size_t>(m + b)]) *
                              0.25;
            TaylorPoly cross = (K2[static_cast<std::size_t>(a)][static_cast<std::size_t>(m + b)] -
                                K2[static_cast<std::size_t>(m + a)][static_cast<std::size_t>(b)]) *
                               0.25;
            g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = diag;
            g[static_cast<std::size_t>(m + a)][static_cast<std::size_t>(m + b)] = diag;
            g[static_cast<std::size_t>(a)][static_cast<std::size_t>(m + b)] = cross;
            g[static_cast<std::size_t>(m + b)][static_cast<std::size_t>(a)] = cross;
        }

    PointJets out;
    out.metric = jet_from_polys(n, p, g, order);

    // complex Hessian must be positive definite for a Kahler potential
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.metric.g.as_matrix());
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw NotAMetricError("potential Hessian is not positive definite at the requested point");

    StructureJet sj;
    sj.F = canonical_structure(n);
    sj.dF = Tensor(n, {Variance::Contra, Variance::Co, Variance::Co});
    out.structure = std::move(sj);
    return out;
}

namespace {

Eigen::MatrixXd central_diff(const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& fn,
                             const Eigen::VectorXd& p, std::span<const int> dirs,
                             const Eigen::VectorXd& h) {
    if (dirs.empty()) return fn(p);
    int d = dirs.back();
    auto rest = dirs.first(dirs.size() - 1);
    Eigen::VectorXd pp = p, pm = p;
    pp(d) += h(d);
    pm(d) -= h(d);
    return (central_diff(fn, pp, rest, h) - central_diff(fn, pm, rest, h)) / (2.0 * h(d));
}

// One Richardson step on the nested second-order stencil lifts the scheme to
// O(h^4), which keeps third derivatives usable at double precision.
Eigen::MatrixXd richardson_diff(const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& fn,
                                const Eigen::VectorXd& p, std::span<const int> dirs,
                                const Eigen::VectorXd& h) {
    Eigen::MatrixXd coarse = central_diff(fn, p, dirs, h);
    Eigen::MatrixXd fine = central_diff(fn, p, dirs, Eigen::VectorXd(h / 2.0));
    return (4.0 * fine - coarse) / 3.0;
}

Eigen::VectorXd fd_steps(const Eigen::VectorXd& p, int total_order) {
    const double eps = std::numeric_limits<double>::epsilon();
    // balance the O(h^4) truncation of the extrapolated stencil against the
    // eps / h^order roundoff floor
    double base = std::pow(eps, 1.0 / static_cast<double>(total_order + 4));
    Eigen::VectorXd h(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) h(i) = base * std::max(1.0, std::abs(p(i)));
    return h;
}

} // namespace

MetricJet finite_difference_jet(const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& g_fn,
                                const Eigen::VectorXd& p, int order) {
    const Eigen::MatrixXd g0 = g_fn(p);
    const int n = static_cast<int>(g0.rows());
    MetricJet jet;
    jet.dim = n;
    jet.order = order;
    jet.point = p;
    jet.g = Tensor::from_matrix(g0, Variance::Co, Variance::Co);
    double det = g0.determinant();
    if (std::abs(det) <= kDegeneracyFloor)
        throw DegenerateMetricError("metric is degenerate at the requested point");

    if (order >= 1) {
        jet.dg = Tensor(n, std::vector<Variance>(3, Variance::Co));
        Eigen::VectorXd h = fd_steps(p, 1);
        for (int k = 0; k < n; ++k) {
            int dirs[1] = {k};
            Eigen::MatrixXd dk = richardson_diff(g_fn, p, dirs, h);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) jet.dg({i, j, k}) = dk(i, j);
        }
    }
    if (order >= 2) {
        jet.d2g = Tensor(n, std::vector<Variance>(4, Variance::Co));
        Eigen::VectorXd h = fd_steps(p, 2);
        for (int k = 0; k < n; ++k)
            for (int l = k; l < n; ++l) {
                int dirs[2] = {k, l};
                Eigen::MatrixXd d = richardson_diff(g_fn, p, dirs, h);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        jet.d2g({i, j, k, l}) = d(i, j);
                        jet.d2g({i, j, l, k}) = d(i, j);
                    }
            }
    }
    if (order >= 3) {
        jet.d3g = Tensor(n, std::vector<Variance>(5, Variance::Co));
        Eigen::VectorXd h = fd_steps(p, 3);
        for (int k = 0; k < n; ++k)
            for (int l = k; l < n; ++l)
                for (int q = l; q < n; ++q) {
                    int dirs[3] = {k, l, q};
                    Eigen::MatrixXd d = richardson_diff(g_fn, p, dirs, h);
                    int perms[6][3] = {{k, l, q}, {k, q, l}, {l, k, q}, {l, q, k}, {q, k, l}, {q, l, k}};
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            for (auto& pm : perms)
                                jet.d3g({i, j, pm[0], pm[1], pm[2]}) = d(i, j);
                }
    }
    return jet;
}

std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> metric_function(const MetricManifest& m) {
    if (m.source == MetricManifest::Source::Adapter) return m.adapter;
    // capture by value so the callable outlives the manifest reference
    MetricManifest copy = m;
    return [copy](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
        if (!copy.in_domain(p)) throw DomainError("stencil leaves chart domain of '" + copy.name + "'");
        const int n = copy.dim;
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
        std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
        if (copy.source == MetricManifest::Source::Expressions) {
            for (const auto& [key, e] : copy.metric) {
                double v = e.eval(copy.coords, pt);
                g(key.first, key.second) = v;
                g(key.second, key.first) = v;
            }
        } else {
            PointJets pj = potential_metric_jet(copy.potential, copy.coords, p, 0);
            g = pj.metric.g.as_matrix();
        }
        return g;
    };
}

PointJets metric_jet(const MetricManifest& m, const Eigen::VectorXd& p, int order) {
    check_point(m, p);
    switch (m.source) {
        case MetricManifest::Source::Expressions:
            return expression_jets(m, p, order);
        case MetricManifest::Source::Potential:
            return potential_metric_jet(m.potential, m.coords, p, order);
        case MetricManifest::Source::Adapter: {
            PointJets out;
            out.metric = finite_difference_jet(m.adapter, p, order);
            return out;
        }
    }
    throw Error("unreachable manifest source");
}

std::vector<int> metric_signature(const Tensor& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.as_matrix());
    std::vector<int> signs;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double ev = es.eigenvalues()(i);
        if (std::abs(ev) <= kDegeneracyFloor) throw DegenerateMetricError("metric eigenvalue near zero");
        signs.push_back(ev > 0 ? 1 : -1);
    }
    return signs;
}

void validate_signature(const MetricManifest& m) {
    PointJets pj = metric_jet(m, m.centroid(), 0);
    std::vector<int> computed = metric_signature(pj.metric.g);
    std::vector<int> declared = m.signature;
    std::sort(computed.begin(), computed.end());
    std::sort(declared.begin(), declared.end());
    if (computed != declared)
        throw ManifestError("declared signature of '" + m.name +
                            "' does not match eigenvalue signs at the chart base point");
}

Tensor inverse_metric(const Tensor& g) {
    Eigen::MatrixXd gm = g.as_matrix();
    if (std::abs(gm.determinant()) <= kDegeneracyFloor)
        throw DegenerateMetricError("metric is degenerate");
    return Tensor::from_matrix(gm.inverse(), Variance::Contra, Variance::Contra);
}

} // namespace stepanov
