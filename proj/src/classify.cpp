#include "stepanov/classify.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "stepanov/parallel.hpp"

namespace stepanov {

namespace {

constexpr double kSymTol = 1e-10;

Tensor basis_covector(int n, int c) {
    Tensor e(n, {Variance::Co});
    e({c}) = 1.0;
    return e;
}

// Row c of F as a covector: Fc(k) = F^c_k.
Tensor structure_row(const Tensor& F, int c) {
    const int n = F.dim();
    Tensor fc(n, {Variance::Co});
    for (int k = 0; k < n; ++k) fc({k}) = F({c, k});
    return fc;
}

Tensor antisym23(const Tensor& t) { return t - transpose_slots(t, {0, 2, 1}); }

Tensor class_lhs(ClassId id, const Tensor& D) {
    switch (id) {
        case ClassId::Omega1:
        case ClassId::Omega1Star:
            return cyclic_sum(D);
        case ClassId::Omega2:
        case ClassId::Omega2Star:
        case ClassId::Omega4Star:
            return antisym23(D);
        default:
            return D;
    }
}

using NamedColumns = std::vector<std::pair<std::string, std::vector<Tensor>>>;

NamedColumns design_columns(ClassId id, const Tensor& g, const Tensor* F, const Tensor& T) {
    const int n = g.dim();
    NamedColumns cols;
    auto add = [&](const std::string& name, const std::function<Tensor(const Tensor&, const Tensor&)>& make,
                   const Tensor& B) {
        std::vector<Tensor> cs;
        cs.reserve(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) cs.push_back(make(basis_covector(n, c), B));
        cols.emplace_back(name, std::move(cs));
    };
    // shared column shapes
    auto trailing = [](const Tensor& e, const Tensor& B) { return outer(B, e); }; // v_k B_ij
    auto leading_pair = [](const Tensor& e, const Tensor& B) { // v_i B_jk + v_j B_ki
        Tensor x = outer(e, B);
        return x + transpose_slots(x, {1, 2, 0});
    };
    auto antisym_trailing = [&](const Tensor& e, const Tensor& B) { // v_k B_ij - v_j B_ik
        return antisym23(outer(B, e));
    };
    auto cyclic = [](const Tensor& e, const Tensor& B) { return cyclic_sum(outer(B, e)); };

    switch (id) {
        case ClassId::Omega1:
        case ClassId::Omega2:
            break;
        case ClassId::Omega3:
            add("a", trailing, g);
            add("b", leading_pair, g);
            break;
        case ClassId::Omega1Star:
            add("lambda", cyclic, T);
            add("mu", cyclic, g);
            break;
        case ClassId::Omega2Star:
            add("rho", antisym_trailing, T);
            add("sigma", antisym_trailing, g);
            break;
        case ClassId::Omega3Star:
            add("phi", trailing, T);
            add("gamma", leading_pair, T);
            add("eta", trailing, g);
            add("chi", leading_pair, g);
            break;
        case ClassId::Omega4Star: {
            // as Omega2* plus the structure terms of the class equation:
            // rho_a T_{ib} F^a_k F^b_j - rho_b T_{ia} F^a_k F^b_j (same shape for sigma/g)
            Tensor TF = f_pullback(T, *F, {1});
            Tensor gFp = f_pullback(g, *F, {1});
            std::vector<Tensor> rho_cols, sigma_cols;
            for (int c = 0; c < n; ++c) {
                Tensor e = basis_covector(n, c);
                Tensor fc = structure_row(*F, c);
                rho_cols.push_back(antisym_trailing(e, T) + antisym23(outer(TF, fc)));
                sigma_cols.push_back(antisym_trailing(e, g) + antisym23(outer(gFp, fc)));
            }
            cols.emplace_back("rho", std::move(rho_cols));
            cols.emplace_back("sigma", std::move(sigma_cols));
            break;
        }
        case ClassId::Omega5Star: {
            // as Omega3* plus gamma_a T_{bk} F^a_i F^b_j + gamma_b T_{ka} F^a_i F^b_j
            // and the chi/g analogue
            Tensor FtT = f_pullback(T, *F, {0}); // T_{a j} F^a_i
            Tensor Fg = f_pullback(g, *F, {0});
            add("phi", trailing, T);
            {
                std::vector<Tensor> gamma_cols, chi_cols;
                for (int c = 0; c < n; ++c) {
                    Tensor e = basis_covector(n, c);
                    Tensor fc = structure_row(*F, c);
                    gamma_cols.push_back(leading_pair(e, T) + outer(fc, FtT) +
                                         transpose_slots(outer(FtT, fc), {0, 2, 1}));
                    chi_cols.push_back(leading_pair(e, g) + outer(fc, Fg) +
                                       transpose_slots(outer(Fg, fc), {0, 2, 1}));
                }
                cols.emplace_back("gamma", std::move(gamma_cols));
                add("eta", trailing, g);
                cols.emplace_back("chi", std::move(chi_cols));
            }
            break;
        }
    }
    return cols;
}

bool needs_structure(ClassId id) { return id == ClassId::Omega4Star || id == ClassId::Omega5Star; }

int columns_dof(const NamedColumns& cols) {
    int dof = 0;
    for (const auto& [name, cs] : cols) {
        (void)name;
        dof += static_cast<int>(cs.size());
    }
    return dof;
}

Eigen::MatrixXd assemble_design(const NamedColumns& cols, Eigen::Index rows) {
    Eigen::MatrixXd A(rows, columns_dof(cols));
    Eigen::Index col = 0;
    for (const auto& [name, cs] : cols) {
        (void)name;
        for (const Tensor& t : cs) A.col(col++) = t.data();
    }
    return A;
}

void check_d_symmetry(const Tensor& D) {
    if (D.rank() != 3) throw RankError("classify: D must be rank 3");
    Tensor asym = D - transpose_slots(D, {1, 0, 2});
    if (max_abs(asym) > kSymTol) throw StructuralError("classify: D must be symmetric in its first two slots");
}

} // namespace

const char* class_name(ClassId id) {
    switch (id) {
        case ClassId::Omega1: return "Omega1";
        case ClassId::Omega2: return "Omega2";
        case ClassId::Omega3: return "Omega3";
        case ClassId::Omega1Star: return "Omega1*";
        case ClassId::Omega2Star: return "Omega2*";
        case ClassId::Omega3Star: return "Omega3*";
        case ClassId::Omega4Star: return "Omega4*";
        case ClassId::Omega5Star: return "Omega5*";
    }
    return "?";
}

ClassFit classify(ClassId id, const Tensor& g, const Tensor* F, const Tensor& T,
                  const Tensor& D, double tol) {
    const int n = g.dim();
    if (T.dim() != n || D.dim() != n) throw RankError("classify: dimension mismatch");
    check_d_symmetry(D);

    ClassFit fit;
    fit.class_id = id;
    if (needs_structure(id) && F == nullptr) {
        fit.applicable = false;
        return fit;
    }

    NamedColumns cols = design_columns(id, g, F, T);
    fit.dof = columns_dof(cols);
    for (const auto& [name, cs] : cols) {
        (void)cs;
        fit.vectors[name] = Eigen::VectorXd::Zero(n);
    }

    // The covariantly constant collapse: a D that is negligible against the
    // scale of T and g makes every class hold with zero vectors. An absolute
    // floor alone is too strict -- third derivatives of an Einstein metric
    // leave O(1e-13) noise in D that would otherwise dominate the relative
    // residual.
    const double dnorm = frobenius(D);
    const double collapse = std::max(kResidualFloor, tol * std::max(frobenius(T), frobenius(g)));
    if (dnorm <= collapse) {
        fit.member = true;
        fit.rel_residual = 0.0;
        return fit;
    }

    Tensor lhs = class_lhs(id, D);
    if (fit.dof == 0) {
        fit.rel_residual = frobenius(lhs) / dnorm;
        fit.member = fit.rel_residual <= tol;
        return fit;
    }

    Eigen::MatrixXd A = assemble_design(cols, lhs.data().size());
    const Eigen::VectorXd& b = lhs.data();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(n * std::numeric_limits<double>::epsilon());
    fit.rank = static_cast<int>(svd.rank());
    fit.rank_deficient = fit.rank < fit.dof;
    Eigen::VectorXd v = svd.solve(b);
    fit.rel_residual = (A * v - b).norm() / dnorm;
    fit.member = fit.rel_residual <= tol;
    Eigen::Index off = 0;
    for (const auto& [name, cs] : cols) {
        fit.vectors[name] = v.segment(off, static_cast<Eigen::Index>(cs.size()));
        off += static_cast<Eigen::Index>(cs.size());
    }
    return fit;
}

namespace {

Eigen::Index flat3(int n, int i, int j, int k) {
    return (static_cast<Eigen::Index>(i) * n + j) * n + k;
}

// Rows expressing D_{ijk} = D_{jik}.
Eigen::MatrixXd symmetry_rows(int n) {
    const Eigen::Index nd = static_cast<Eigen::Index>(n) * n * n;
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(n) * n * (n - 1) / 2, nd);
    rows.setZero();
    Eigen::Index r = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                rows(r, flat3(n, i, j, k)) += 1.0;
                rows(r, flat3(n, j, i, k)) -= 1.0;
                ++r;
            }
    return rows;
}

// Rows expressing the differentiated compatibility identity
// F^a_i D_{ajk} + F^a_j D_{aik} = 0.
Eigen::MatrixXd compat_rows(int n, const Tensor& F) {
    const Eigen::Index nd = static_cast<Eigen::Index>(n) * n * n;
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(n) * n * (n + 1) / 2, nd);
    rows.setZero();
    Eigen::Index r = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                for (int a = 0; a < n; ++a) {
                    rows(r, flat3(n, a, j, k)) += F({a, i});
                    rows(r, flat3(n, a, i, k)) += F({a, j});
                }
                ++r;
            }
    return rows;
}

// Rows of the antisymmetrized left-hand side D_{ijk} - D_{ikj}.
Eigen::MatrixXd antisym_lhs_rows(int n) {
    const Eigen::Index nd = static_cast<Eigen::Index>(n) * n * n;
    Eigen::MatrixXd rows(nd, nd);
    rows.setZero();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                rows(flat3(n, i, j, k), flat3(n, i, j, k)) += 1.0;
                rows(flat3(n, i, j, k), flat3(n, i, k, j)) -= 1.0;
            }
    return rows;
}

Eigen::MatrixXd kernel_of(const Eigen::MatrixXd& M) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = (sv.size() ? sv(0) : 0.0) * 1e-10;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return svd.matrixV().rightCols(svd.matrixV().cols() - rank);
}

// null space of the symmetry + compatibility constraints, cached per dim
const Eigen::MatrixXd& free_kernel(int n) {
    static std::mutex mtx;
    static std::map<int, Eigen::MatrixXd> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Tensor F = canonical_structure(n);
    Eigen::MatrixXd sym = symmetry_rows(n);
    Eigen::MatrixXd compat = compat_rows(n, F);
    Eigen::MatrixXd stacked(sym.rows() + compat.rows(), sym.cols());
    stacked << sym, compat;
    return cache.emplace(n, kernel_of(stacked)).first->second;
}

Eigen::VectorXd random_normal(SplitMix64& rng, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
    return v;
}

// random symmetric matrix projected onto the hybrid identity B = F^t B F
Eigen::MatrixXd hybrid_symmetric(SplitMix64& rng, int n, const Tensor& F, bool pos_def) {
    Eigen::MatrixXd fm = F.as_matrix();
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
    Eigen::MatrixXd B = pos_def ? Eigen::MatrixXd(A * A.transpose() + Eigen::MatrixXd::Identity(n, n))
                                : Eigen::MatrixXd(0.5 * (A + A.transpose()));
    return 0.5 * (B + fm.transpose() * B * fm);
}

Tensor tensor2(const Eigen::MatrixXd& m) { return Tensor::from_matrix(m, Variance::Co, Variance::Co); }

Tensor tensor3(int n, const Eigen::VectorXd& flat) {
    return Tensor(n, {Variance::Co, Variance::Co, Variance::Co}, flat);
}

// D assembled from named columns dotted with vectors.
Tensor combine_columns(int n, const NamedColumns& cols,
                       const std::map<std::string, Eigen::VectorXd>& vectors) {
    Tensor out(n, {Variance::Co, Variance::Co, Variance::Co});
    for (const auto& [name, cs] : cols) {
        const Eigen::VectorXd& v = vectors.at(name);
        for (int c = 0; c < n; ++c) out.data() += v(c) * cs[static_cast<std::size_t>(c)].data();
    }
    return out;
}

} // namespace

AlgebraicInstance generate_instance(int dim, InstanceKind kind, std::uint64_t seed) {
    if (dim < 4 || dim > 8 || dim % 2 != 0) throw Error("generate_instance: dim must be even, 4..8");
    const int n = dim;
    Tensor F = canonical_structure(n);
    const Eigen::Index nd = static_cast<Eigen::Index>(n) * n * n;

    for (int attempt = 0; attempt < 10; ++attempt) {
        SplitMix64 rng(seed + static_cast<std::uint64_t>(attempt) * 0x9e3779b97f4a7c15ULL);
        Eigen::MatrixXd gm = hybrid_symmetric(rng, n, F, /*pos_def=*/true);
        if (std::abs(gm.determinant()) <= 1e-8) continue;
        Eigen::MatrixXd tm = hybrid_symmetric(rng, n, F, /*pos_def=*/false);

        AlgebraicInstance inst;
        inst.dim = n;
        inst.seed = seed;
        inst.F = F;
        inst.g = tensor2(gm);
        inst.T = tensor2(tm);

        if (kind == InstanceKind::Unconstrained) {
            const Eigen::MatrixXd& ker = free_kernel(n);
            Eigen::VectorXd coeffs = random_normal(rng, static_cast<int>(ker.cols()));
            inst.D = tensor3(n, ker * coeffs);
            return inst;
        }

        if (kind == InstanceKind::Omega2Star) {
            Eigen::VectorXd rho = random_normal(rng, n);
            Eigen::VectorXd sigma = random_normal(rng, n);
            NamedColumns cols = design_columns(ClassId::Omega2Star, inst.g, &F, inst.T);
            Eigen::VectorXd rhs =
                combine_columns(n, cols, {{"rho", rho}, {"sigma", sigma}}).data();
            Eigen::MatrixXd sym = symmetry_rows(n);
            Eigen::MatrixXd compat = compat_rows(n, F);
            Eigen::MatrixXd eq = antisym_lhs_rows(n);
            Eigen::MatrixXd M(sym.rows() + compat.rows() + eq.rows(), nd);
            M << sym, compat, eq;
            Eigen::VectorXd b = Eigen::VectorXd::Zero(M.rows());
            b.tail(nd) = rhs;
            Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
            svd.setThreshold(1e-10);
            Eigen::VectorXd d = svd.solve(b);
            if ((M * d - b).norm() > 1e-10 * (1.0 + b.norm())) continue;
            inst.D = tensor3(n, d);
            inst.planted["rho"] = rho;
            inst.planted["sigma"] = sigma;
            return inst;
        }

        // Omega4Star: arbitrary planted vectors are infeasible here (the
        // symmetry of D forces a joint constraint on (D, rho, sigma)), so
        // sample the joint null space over all unknowns instead.
        NamedColumns cols = design_columns(ClassId::Omega4Star, inst.g, &F, inst.T);
        Eigen::MatrixXd rhs_cols = assemble_design(cols, nd);
        Eigen::MatrixXd sym = symmetry_rows(n);
        Eigen::MatrixXd compat = compat_rows(n, F);
        Eigen::MatrixXd eq = antisym_lhs_rows(n);
        Eigen::MatrixXd M(sym.rows() + compat.rows() + eq.rows(), nd + rhs_cols.cols());
        M.setZero();
        M.topLeftCorner(sym.rows(), nd) = sym;
        M.block(sym.rows(), 0, compat.rows(), nd) = compat;
        M.block(sym.rows() + compat.rows(), 0, eq.rows(), nd) = eq;
        M.bottomRightCorner(eq.rows(), rhs_cols.cols()) = -rhs_cols;
        Eigen::MatrixXd ker = kernel_of(M);
        Eigen::VectorXd x;
        if (ker.cols() == 0) {
            x = Eigen::VectorXd::Zero(nd + rhs_cols.cols());
        } else {
            x = ker * random_normal(rng, static_cast<int>(ker.cols()));
        }
        inst.D = tensor3(n, x.head(nd));
        inst.planted["rho"] = x.segment(nd, n);
        inst.planted["sigma"] = x.tail(n);
        return inst;
    }
    throw Error("generate_instance: no nondegenerate metric after 10 attempts");
}

AlgebraicInstance build_omega3star_instance(int dim, std::uint64_t seed) {
    if (dim < 4 || dim > 8 || dim % 2 != 0) throw Error("build_omega3star_instance: dim must be even, 4..8");
    const int n = dim;
    Tensor F = canonical_structure(n);
    SplitMix64 rng(seed);
    AlgebraicInstance inst;
    inst.dim = n;
    inst.seed = seed;
    inst.F = F;
    inst.g = tensor2(hybrid_symmetric(rng, n, F, true));
    inst.T = tensor2(hybrid_symmetric(rng, n, F, false));
    for (const char* name : {"phi", "gamma", "eta", "chi"}) inst.planted[name] = random_normal(rng, n);
    NamedColumns cols = design_columns(ClassId::Omega3Star, inst.g, &F, inst.T);
    inst.D = combine_columns(n, cols, inst.planted);
    return inst;
}

double verify_eq16(const AlgebraicInstance& inst) {
    Eigen::VectorXd rho = inst.planted.at("phi") - inst.planted.at("gamma");
    Eigen::VectorXd sigma = inst.planted.at("eta") - inst.planted.at("chi");
    NamedColumns cols = design_columns(ClassId::Omega2Star, inst.g, &inst.F, inst.T);
    Tensor rhs = combine_columns(inst.dim, cols, {{"rho", rho}, {"sigma", sigma}});
    return max_abs(class_lhs(ClassId::Omega2Star, inst.D) - rhs);
}

namespace {

Tensor as_tensor(const Eigen::VectorXd& v) {
    Tensor t(static_cast<int>(v.size()), {Variance::Co});
    t.data() = v;
    return t;
}

} // namespace

Theorem1Report verify_theorem1(const AlgebraicInstance& inst, double tol) {
    const int n = inst.dim;
    Theorem1Report rep;

    // fit T_{ij,k} = rho_k T_ij + sigma_k g_ij
    {
        ClassFit fit;
        fit.class_id = ClassId::Omega2Star; // the class whose hypothesis produced the fit
        fit.dof = 2 * n;
        NamedColumns cols;
        std::vector<Tensor> rc, sc;
        for (int c = 0; c < n; ++c) {
            rc.push_back(outer(inst.T, basis_covector(n, c)));
            sc.push_back(outer(inst.g, basis_covector(n, c)));
        }
        cols.emplace_back("rho", std::move(rc));
        cols.emplace_back("sigma", std::move(sc));
        const double dnorm = std::max(frobenius(inst.D), kResidualFloor);
        Eigen::MatrixXd A = assemble_design(cols, inst.D.data().size());
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(n * std::numeric_limits<double>::epsilon());
        Eigen::VectorXd v = svd.solve(inst.D.data());
        fit.rank = static_cast<int>(svd.rank());
        fit.rank_deficient = fit.rank < fit.dof;
        fit.rel_residual = (A * v - inst.D.data()).norm() / dnorm;
        fit.member = fit.rel_residual <= tol;
        fit.vectors["rho"] = v.head(n);
        fit.vectors["sigma"] = v.tail(n);
        rep.fit = fit;
    }

    const Tensor rho = as_tensor(rep.fit.vectors["rho"]);
    const Tensor sigma = as_tensor(rep.fit.vectors["sigma"]);
    const Tensor& F = inst.F;
    const Tensor& T = inst.T;
    const Tensor& g = inst.g;
    const Tensor& D = inst.D;
    Tensor FtT = f_pullback(T, F, {0}); // T_{a k} F^a_i
    Tensor Fg = f_pullback(g, F, {0});
    Tensor wr = f_pullback(rho, F, {0}); // rho_b F^b_j
    Tensor ws = f_pullback(sigma, F, {0});

    // T_{ij,k} - T_{ak,b} F^a_i F^b_j = rho_k T_ij - rho_b T_{ak} F^a_i F^b_j
    //                                 + sigma_k g_ij - sigma_b g_{ak} F^a_i F^b_j
    {
        Tensor lhs = D - f_pullback(transpose_slots(D, {0, 2, 1}), F, {0, 1});
        Tensor rhs = outer(T, rho) - transpose_slots(outer(FtT, wr), {0, 2, 1}) + outer(g, sigma) -
                     transpose_slots(outer(Fg, ws), {0, 2, 1});
        rep.res13 = max_abs(lhs - rhs);
    }
    // T_{ij,k} + T_{jk,i} = rho_k T_ij + rho_i T_jk + sigma_k g_ij +/- sigma_i g_jk
    {
        Tensor lhs = D + transpose_slots(D, {1, 2, 0});
        Tensor rhs_plus = outer(T, rho) + outer(rho, T) + outer(g, sigma) + outer(sigma, g);
        Tensor rhs_minus = outer(T, rho) + outer(rho, T) + outer(g, sigma) - outer(sigma, g);
        rep.res14 = max_abs(lhs - rhs_plus);
        rep.res14_printed = max_abs(lhs - rhs_minus);
    }
    // T_{ij,k} + T_{ik,j} = rho_k T_ij + rho_j T_ik + sigma_k g_ij + sigma_j g_ik
    {
        Tensor lhs = D + transpose_slots(D, {0, 2, 1});
        Tensor rhs = outer(T, rho) + transpose_slots(outer(T, rho), {0, 2, 1}) + outer(g, sigma) +
                     transpose_slots(outer(g, sigma), {0, 2, 1});
        rep.res15 = max_abs(lhs - rhs);
    }
    rep.pass = rep.fit.member;
    return rep;
}

Theorem2Report verify_theorem2(const MetricManifest& m, const std::vector<Eigen::VectorXd>& points,
                               double tol) {
    Theorem2Report rep;
    rep.points.resize(points.size());
    rep.pass = true;
    parallel_for(static_cast<int>(points.size()), [&](int idx) {
        const Eigen::VectorXd& p = points[static_cast<std::size_t>(idx)];
        PointJets pj = metric_jet(m, p, 3);
        ConnectionJet conn = christoffel(pj.metric);
        CurvaturePack cp = curvature(pj.metric);
        KahlerReport kr = check_structure(pj, conn, cp, kStructureTolExact);
        if (!theorem_preconditions(kr, kStructureTolExact))
            throw PreconditionError("input is not a Kahler structure at a sampled point");
        Theorem2PointRecord& rec = rep.points[static_cast<std::size_t>(idx)];
        rec.point = p;
        rec.dT_norm = frobenius(cp.dT);
        rec.dricci_norm = frobenius(cp.dricci);
        rec.omega2_member = classify(ClassId::Omega2, cp.g, &pj.structure->F, cp.T, cp.dT, tol).member;
        rec.omega3_member = classify(ClassId::Omega3, cp.g, &pj.structure->F, cp.T, cp.dT, tol).member;
        bool small = rec.dT_norm <= tol && rec.dricci_norm <= tol;
        bool members = rec.omega2_member && rec.omega3_member;
        // forward: membership forces covariant constancy; converse: constancy
        // makes both classes trivially satisfied
        rec.consistent = (!rec.omega2_member || small) && (!rec.omega3_member || small) &&
                         (rec.dT_norm > tol || members);
    });
    for (const auto& rec : rep.points)
        if (!rec.consistent) rep.pass = false;
    return rep;
}

Theorem3Report verify_theorem3(int dim, int trials, std::uint64_t seed, double tol) {
    Theorem3Report rep;
    rep.trials.resize(static_cast<std::size_t>(trials));
    parallel_for(trials, [&](int t) {
        std::uint64_t s = seed + static_cast<std::uint64_t>(t);
        AlgebraicInstance inst = generate_instance(dim, InstanceKind::Omega4Star, s);
        Theorem3Trial& trial = rep.trials[static_cast<std::size_t>(t)];
        trial.seed = s;
        trial.instance_norm = frobenius(inst.D);
        trial.fit = classify(ClassId::Omega5Star, inst.g, &inst.F, inst.T, inst.D, tol);
    });
    rep.pass = true;
    for (const auto& t : rep.trials) {
        rep.max_rel_residual = std::max(rep.max_rel_residual, t.fit.rel_residual);
        if (!t.fit.member) rep.pass = false;
    }
    return rep;
}

FieldReport classify_field(const MetricManifest& m, const std::vector<Eigen::VectorXd>& points,
                           double tol, bool use_fd) {
    FieldReport rep;
    rep.points.resize(points.size());
    const double structure_tol = use_fd ? kStructureTolFd : kStructureTolExact;
    parallel_for(static_cast<int>(points.size()), [&](int idx) {
        const Eigen::VectorXd& p = points[static_cast<std::size_t>(idx)];
        PointJets pj = metric_jet(m, p, 3);
        if (use_fd) pj.metric = finite_difference_jet(metric_function(m), p, 3);
        ConnectionJet conn = christoffel(pj.metric);
        CurvaturePack cp = curvature(pj.metric);
        PointRecord& rec = rep.points[static_cast<std::size_t>(idx)];
        rec.point = p;
        rec.kahler = check_structure(pj, conn, cp, structure_tol);
        rec.scalar = cp.scalar;
        rec.dT_norm = frobenius(cp.dT);
        rec.div_T = max_abs(divergence_T(cp));
        rec.trace_residual = trace_identity_residual(cp);
        const Tensor* F = pj.structure ? &pj.structure->F : nullptr;
        for (int c = 0; c < kClassCount; ++c)
            rec.fits.push_back(classify(static_cast<ClassId>(c), cp.g, F, cp.T, cp.dT, tol));
    });
    rep.aggregate_member.assign(kClassCount, 1);
    rep.worst_residual.assign(kClassCount, 0.0);
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        for (int c = 0; c < kClassCount; ++c) {
            const ClassFit& f = rep.points[i].fits[static_cast<std::size_t>(c)];
            if (!f.applicable) {
                rep.aggregate_member[static_cast<std::size_t>(c)] = -1;
                continue;
            }
            if (rep.aggregate_member[static_cast<std::size_t>(c)] != -1 && !f.member)
                rep.aggregate_member[static_cast<std::size_t>(c)] = 0;
            rep.worst_residual[static_cast<std::size_t>(c)] =
                std::max(rep.worst_residual[static_cast<std::size_t>(c)], f.rel_residual);
            if (f.rank_deficient)
                rep.warnings.push_back(std::string("rank-deficient fit for ") + class_name(f.class_id) +
                                       " at point " + std::to_string(i) + " (rank " +
                                       std::to_string(f.rank) + " of " + std::to_string(f.dof) + ")");
        }
    }
    std::sort(rep.warnings.begin(), rep.warnings.end());
    rep.warnings.erase(std::unique(rep.warnings.begin(), rep.warnings.end()), rep.warnings.end());
    return rep;
}

} // namespace stepanov
