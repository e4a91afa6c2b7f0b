#include "stepanov/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "stepanov/taylor.hpp"

namespace stepanov {

namespace {

using Poly = TaylorPoly;
using PolyMat = std::vector<std::vector<Poly>>;
using PolyT3 = std::vector<PolyMat>; // [h][i][j]

Poly poly_from_jet_component(const MetricJet& jet, int i, int j) {
    const int n = jet.dim;
    const int ord = jet.order;
    auto basis = TaylorBasis::get(n, ord);
    Poly out = Poly::constant(n, ord, 0.0);
    // rebuild coefficients one monomial at a time via a synthetic polynomial:
    // c_alpha = (d^alpha g_ij) / alpha!
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis->exps.size()));
    std::vector<int> dirs;
    for (std::size_t a = 0; a < basis->exps.size(); ++a) {
        dirs.clear();
        int deg = 0;
        for (int v = 0; v < n; ++v) {
            for (int r = 0; r < basis->exps[a][static_cast<std::size_t>(v)]; ++r) dirs.push_back(v);
            deg += basis->exps[a][static_cast<std::size_t>(v)];
        }
        double value = 0.0;
        switch (deg) {
            case 0: value = jet.g({i, j}); break;
            case 1: value = jet.dg({i, j, dirs[0]}); break;
            case 2: value = jet.d2g({i, j, dirs[0], dirs[1]}); break;
            case 3: value = jet.d3g({i, j, dirs[0], dirs[1], dirs[2]}); break;
            default: throw Error("jet order beyond 3 unsupported in the curvature pipeline");
        }
        coeffs(static_cast<Eigen::Index>(a)) = value / basis->factorial[a];
    }
    // construct through public API: sum of monomial products would be slow;
    // instead assemble via repeated derivative structure is unnecessary -- use
    // the coefficient layout shared with partial(): value*x^alpha terms.
    // TaylorPoly lacks a raw constructor here, so synthesize by evaluation:
    // out = sum_a coeffs(a) * prod_v (x_v - p_v)^alpha_v
    for (std::size_t a = 0; a < basis->exps.size(); ++a) {
        if (coeffs(static_cast<Eigen::Index>(a)) == 0.0) continue;
        Poly term = Poly::constant(n, ord, coeffs(static_cast<Eigen::Index>(a)));
        for (int v = 0; v < n; ++v)
            for (int r = 0; r < basis->exps[a][static_cast<std::size_t>(v)]; ++r) {
                Poly xi = Poly::variable(n, ord, v, 0.0); // centered increment
                term = term * xi;
            }
        out += term;
    }
    return out;
}

PolyMat polys_from_jet(const MetricJet& jet) {
    const int n = jet.dim;
    PolyMat g(static_cast<std::size_t>(n),
              std::vector<Poly>(static_cast<std::size_t>(n), Poly::constant(n, jet.order, 0.0)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Poly p = poly_from_jet_component(jet, i, j);
            g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = p;
            g[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = p;
        }
    return g;
}

PolyMat matmul(const PolyMat& a, const PolyMat& b) {
    const std::size_t n = a.size();
    PolyMat c(n, std::vector<Poly>(n, Poly()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Poly acc = a[i][0] * b[0][j];
            for (std::size_t k = 1; k < n; ++k) acc += a[i][k] * b[k][j];
            c[i][j] = acc;
        }
    return c;
}

// inverse of a polynomial-valued matrix by Newton iteration from the value inverse
PolyMat poly_inverse(const PolyMat& a, int order) {
    const std::size_t n = a.size();
    Eigen::MatrixXd a0(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j].value();
    if (std::abs(a0.determinant()) <= kDegeneracyFloor) throw DegenerateMetricError("metric is degenerate");
    Eigen::MatrixXd inv0 = a0.inverse();
    const int nv = a[0][0].nvars();
    PolyMat x(n, std::vector<Poly>(n, Poly()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            x[i][j] = Poly::constant(nv, order, inv0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    int iters = 0;
    while ((1 << iters) <= order) ++iters;
    for (int it = 0; it < iters; ++it) {
        PolyMat ax = matmul(a, x);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) ax[i][j] = -ax[i][j];
            ax[i][i] += 2.0;
        }
        x = matmul(x, ax);
    }
    return x;
}

PolyMat truncate_mat(const PolyMat& a, int order) {
    PolyMat out = a;
    for (auto& row : out)
        for (auto& p : row) p = p.truncated(order);
    return out;
}

struct Pipeline {
    int n;
    int gamma_order;
    PolyT3 gamma; // Gamma^h_ij, polynomial order gamma_order

    explicit Pipeline(const MetricJet& jet) : n(jet.dim) {
        if (jet.order < 1) throw Error("christoffel requires jets of order >= 1");
        gamma_order = jet.order - 1;
        PolyMat g = polys_from_jet(jet);
        PolyMat ginv = truncate_mat(poly_inverse(g, jet.order), gamma_order);
        // coordinate partials of g, order gamma_order
        std::vector<PolyMat> dg(static_cast<std::size_t>(n)); // dg[k][i][j] = d_k g_ij
        for (int k = 0; k < n; ++k) {
            dg[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(n),
                                                   std::vector<Poly>(static_cast<std::size_t>(n), Poly()));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    dg[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                        g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].derivative(k);
        }
        gamma.assign(static_cast<std::size_t>(n),
                     PolyMat(static_cast<std::size_t>(n), std::vector<Poly>(static_cast<std::size_t>(n), Poly())));
        for (int h = 0; h < n; ++h)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Poly acc = Poly::constant(n, gamma_order, 0.0);
                    for (int a = 0; a < n; ++a) {
                        Poly term = dg[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] +
                                    dg[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] -
                                    dg[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                        acc += ginv[static_cast<std::size_t>(h)][static_cast<std::size_t>(a)] * term;
                    }
                    gamma[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc * 0.5;
                }
    }
};

Tensor gamma_value(const Pipeline& pl) {
    Tensor t(pl.n, {Variance::Contra, Variance::Co, Variance::Co});
    for (int h = 0; h < pl.n; ++h)
        for (int i = 0; i < pl.n; ++i)
            for (int j = 0; j < pl.n; ++j)
                t({h, i, j}) = pl.gamma[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value();
    return t;
}

} // namespace

ConnectionJet christoffel(const MetricJet& jet) {
    Pipeline pl(jet);
    const int n = jet.dim;
    ConnectionJet cj;
    cj.dim = n;
    cj.order = pl.gamma_order;
    cj.gamma = gamma_value(pl);
    std::vector<int> alpha(static_cast<std::size_t>(n), 0);
    if (pl.gamma_order >= 1) {
        cj.dgamma = Tensor(n, {Variance::Contra, Variance::Co, Variance::Co, Variance::Co});
        for (int h = 0; h < n; ++h)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        std::fill(alpha.begin(), alpha.end(), 0);
                        alpha[static_cast<std::size_t>(k)] = 1;
                        cj.dgamma({h, i, j, k}) =
                            pl.gamma[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].partial(alpha);
                    }
    }
    if (pl.gamma_order >= 2) {
        cj.d2gamma = Tensor(n, {Variance::Contra, Variance::Co, Variance::Co, Variance::Co, Variance::Co});
        for (int h = 0; h < n; ++h)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l) {
                            std::fill(alpha.begin(), alpha.end(), 0);
                            alpha[static_cast<std::size_t>(k)] += 1;
                            alpha[static_cast<std::size_t>(l)] += 1;
                            cj.d2gamma({h, i, j, k, l}) =
                                pl.gamma[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].partial(alpha);
                        }
    }
    return cj;
}

Tensor covariant_derivative(const Tensor& t, const Tensor& dt, const Tensor& gamma) {
    const int n = t.dim();
    const int r = t.rank();
    if (dt.rank() != r + 1) throw RankError("covariant_derivative: dt must have one extra slot");
    std::vector<Variance> out_slots = t.slots();
    out_slots.push_back(Variance::Co);
    Tensor out = dt; // coordinate partial part
    // correction terms
    std::vector<int> idx(static_cast<std::size_t>(r + 1), 0);
    std::vector<int> src(static_cast<std::size_t>(r), 0);
    std::size_t total = static_cast<std::size_t>(out.data().size());
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int s = r; s >= 0; --s) {
            idx[static_cast<std::size_t>(s)] = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
        }
        const int k = idx[static_cast<std::size_t>(r)];
        double corr = 0.0;
        for (int s = 0; s < r; ++s) {
            for (int a = 0; a < n; ++a) {
                for (int q = 0; q < r; ++q) src[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q)];
                src[static_cast<std::size_t>(s)] = a;
                if (t.slots()[static_cast<std::size_t>(s)] == Variance::Co)
                    corr -= gamma({a, k, idx[static_cast<std::size_t>(s)]}) * t.at(src);
                else
                    corr += gamma({idx[static_cast<std::size_t>(s)], k, a}) * t.at(src);
            }
        }
        out.data()(static_cast<Eigen::Index>(flat)) += corr;
    }
    return out;
}

CurvaturePack curvature(const MetricJet& jet) {
    if (jet.order < 3) throw Error("curvature requires order-3 jets");
    Pipeline pl(jet);
    const int n = jet.dim;

    // Riemann polynomials, order 1
    const int rord = pl.gamma_order - 1; // = 1
    std::vector<std::vector<PolyMat>> riem(static_cast<std::size_t>(n)); // [h][i][j][k]
    auto gam = [&](int h, int i, int j) -> const Poly& {
        return pl.gamma[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    };
    for (int h = 0; h < n; ++h) {
        riem[static_cast<std::size_t>(h)].assign(
            static_cast<std::size_t>(n),
            PolyMat(static_cast<std::size_t>(n), std::vector<Poly>(static_cast<std::size_t>(n), Poly())));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    Poly acc = gam(h, i, k).derivative(j) - gam(h, i, j).derivative(k);
                    for (int a = 0; a < n; ++a)
                        acc += gam(h, j, a).truncated(rord) * gam(a, i, k).truncated(rord) -
                               gam(h, k, a).truncated(rord) * gam(a, i, j).truncated(rord);
                    riem[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = acc;
                }
    }

    PolyMat gpoly = polys_from_jet(jet);
    PolyMat ginv1 = truncate_mat(poly_inverse(gpoly, jet.order), rord);

    // Ricci and scalar, order 1
    PolyMat ricci(static_cast<std::size_t>(n), std::vector<Poly>(static_cast<std::size_t>(n), Poly()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Poly acc = riem[0][static_cast<std::size_t>(i)][0][static_cast<std::size_t>(j)];
            for (int a = 1; a < n; ++a)
                acc += riem[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)][static_cast<std::size_t>(a)][static_cast<std::size_t>(j)];
            ricci[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
        }
    Poly Rpoly = Poly::constant(n, rord, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            Rpoly += ginv1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * ricci[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

    PolyMat Tpoly(static_cast<std::size_t>(n), std::vector<Poly>(static_cast<std::size_t>(n), Poly()));
    PolyMat g1 = truncate_mat(gpoly, rord);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            Tpoly[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                ricci[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                0.5 * (Rpoly * g1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);

    CurvaturePack cp;
    cp.dim = n;
    cp.g = jet.g;
    cp.g_inv = inverse_metric(jet.g);
    cp.riemann = Tensor(n, {Variance::Contra, Variance::Co, Variance::Co, Variance::Co});
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    cp.riemann({h, i, j, k}) =
                        riem[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].value();
    cp.ricci = Tensor(n, {Variance::Co, Variance::Co});
    cp.T = Tensor(n, {Variance::Co, Variance::Co});
    Tensor dricci_part(n, {Variance::Co, Variance::Co, Variance::Co});
    Tensor dT_part(n, {Variance::Co, Variance::Co, Variance::Co});
    std::vector<int> alpha(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cp.ricci({i, j}) = ricci[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value();
            cp.T({i, j}) = Tpoly[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value();
            for (int k = 0; k < n; ++k) {
                std::fill(alpha.begin(), alpha.end(), 0);
                alpha[static_cast<std::size_t>(k)] = 1;
                dricci_part({i, j, k}) = ricci[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].partial(alpha);
                dT_part({i, j, k}) = Tpoly[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].partial(alpha);
            }
        }
    cp.scalar = Rpoly.value();
    cp.dscalar = Tensor(n, {Variance::Co});
    for (int k = 0; k < n; ++k) {
        std::fill(alpha.begin(), alpha.end(), 0);
        alpha[static_cast<std::size_t>(k)] = 1;
        cp.dscalar({k}) = Rpoly.partial(alpha);
    }
    Tensor gam0 = gamma_value(pl);
    cp.dricci = covariant_derivative(cp.ricci, dricci_part, gam0);
    cp.dT = covariant_derivative(cp.T, dT_part, gam0);
    return cp;
}

Tensor divergence_T(const CurvaturePack& cp) {
    const int n = cp.dim;
    Tensor div(n, {Variance::Co});
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) acc += cp.g_inv({b, a}) * cp.dT({a, i, b});
        div({i}) = acc;
    }
    return div;
}

double trace_identity_residual(const CurvaturePack& cp) {
    double tr = 0.0;
    for (int i = 0; i < cp.dim; ++i)
        for (int j = 0; j < cp.dim; ++j) tr += cp.g_inv({i, j}) * cp.T({i, j});
    return std::abs(tr - cp.scalar * (1.0 - 0.5 * cp.dim));
}

namespace {

Eigen::VectorXd geodesic_accel(const MetricManifest& m, const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
    PointJets pj = metric_jet(m, x, 1);
    ConnectionJet cj = christoffel(pj.metric);
    const int n = m.dim;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    for (int h = 0; h < n; ++h) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += cj.gamma({h, i, j}) * v(i) * v(j);
        a(h) = -acc;
    }
    return a;
}

} // namespace

GeodesicTrace geodesic_trace(const MetricManifest& m, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& v0, double s_end, int steps) {
    GeodesicTrace trace;
    double h = s_end / steps;
    Eigen::VectorXd x = x0, v = v0;
    trace.states.push_back({0.0, x, v});
    for (int step = 0; step < steps; ++step) {
        try {
            Eigen::VectorXd k1x = v, k1v = geodesic_accel(m, x, v);
            Eigen::VectorXd k2x = v + 0.5 * h * k1v, k2v = geodesic_accel(m, x + 0.5 * h * k1x, v + 0.5 * h * k1v);
            Eigen::VectorXd k3x = v + 0.5 * h * k2v, k3v = geodesic_accel(m, x + 0.5 * h * k2x, v + 0.5 * h * k2v);
            Eigen::VectorXd k4x = v + h * k3v, k4v = geodesic_accel(m, x + h * k3x, v + h * k3v);
            x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        } catch (const DomainError&) {
            trace.exited = true;
            return trace;
        }
        if (!m.in_domain(x)) {
            trace.exited = true;
            return trace;
        }
        trace.states.push_back({h * (step + 1), x, v});
    }
    return trace;
}

double killing_quadratic_drift(const MetricManifest& m, const GeodesicTrace& trace) {
    double q0 = 0.0, drift = 0.0;
    bool first = true;
    for (const auto& st : trace.states) {
        PointJets pj = metric_jet(m, st.x, 2);
        Pipeline pl(pj.metric);
        // Ricci value from order-2 jets
        const int n = m.dim;
        double q = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double rij = 0.0;
                for (int a = 0; a < n; ++a) {
                    // R^a_{i a j} at the point
                    Poly acc = pl.gamma[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                                   .derivative(a)
                                   .truncated(0) -
                               pl.gamma[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)][static_cast<std::size_t>(a)]
                                   .derivative(j)
                                   .truncated(0);
                    double val = acc.value();
                    for (int b = 0; b < n; ++b)
                        val += pl.gamma[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].value() *
                                   pl.gamma[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value() -
                               pl.gamma[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)][static_cast<std::size_t>(b)].value() *
                                   pl.gamma[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)][static_cast<std::size_t>(a)].value();
                    rij += val;
                }
                q += rij * st.v(i) * st.v(j);
            }
        if (first) {
            q0 = q;
            first = false;
        } else {
            drift = std::max(drift, std::abs(q - q0));
        }
    }
    return drift;
}

double speed_drift(const MetricManifest& m, const GeodesicTrace& trace) {
    double q0 = 0.0, drift = 0.0;
    bool first = true;
    auto g_fn = metric_function(m);
    for (const auto& st : trace.states) {
        Eigen::MatrixXd g = g_fn(st.x);
        double q = st.v.dot(g * st.v);
        if (first) {
            q0 = q;
            first = false;
        } else {
            drift = std::max(drift, std::abs(q - q0));
        }
    }
    return drift;
}

} // namespace stepanov
