#include "stepanov/kahler.hpp"

namespace stepanov {

KahlerReport check_structure(const PointJets& jets, const ConnectionJet& conn,
                             const CurvaturePack& cp, double tol) {
    KahlerReport rep;
    if (!jets.structure) return rep;
    const int n = jets.metric.dim;
    if (n % 2 != 0) throw StructuralError("structure requires even dimension");
    rep.applicable = true;
    const Tensor& F = jets.structure->F;
    const Tensor& dF = jets.structure->dF;
    const Tensor& g = cp.g;

    // F^h_a F^a_i + delta^h_i
    Tensor fsq(n, {Variance::Contra, Variance::Co});
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i) {
            double acc = (h == i) ? 1.0 : 0.0;
            for (int a = 0; a < n; ++a) acc += F({h, a}) * F({a, i});
            fsq({h, i}) = acc;
        }
    rep.res_f_square = max_abs(fsq);

    // F^a_i g_{aj} + F^a_j g_{ai}
    Tensor compat(n, {Variance::Co, Variance::Co});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int a = 0; a < n; ++a) acc += F({a, i}) * g({a, j}) + F({a, j}) * g({a, i});
            compat({i, j}) = acc;
        }
    rep.res_compat = max_abs(compat);

    // F^h_{i,j}
    Tensor nablaF = covariant_derivative(F, dF, conn.gamma);
    rep.res_parallel = max_abs(nablaF);

    auto hybrid_residual = [&](const Tensor& B) {
        Tensor pulled = f_pullback(B, F, {0, 1});
        return max_abs(B - pulled);
    };
    rep.res_g_hybrid = hybrid_residual(g);
    rep.res_ricci_hybrid = hybrid_residual(cp.ricci);
    rep.res_T_hybrid = hybrid_residual(cp.T);

    Tensor tcompat(n, {Variance::Co, Variance::Co});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int a = 0; a < n; ++a) acc += F({a, i}) * cp.T({a, j}) + F({a, j}) * cp.T({a, i});
            tcompat({i, j}) = acc;
        }
    rep.res_T_compat = max_abs(tcompat);

    rep.is_kahler = rep.res_f_square <= tol && rep.res_compat <= tol && rep.res_parallel <= tol;
    return rep;
}

bool theorem_preconditions(const KahlerReport& report, double tol) {
    if (!report.applicable) return false;
    return report.res_f_square <= tol && report.res_compat <= tol && report.res_parallel <= tol &&
           report.res_T_hybrid <= tol && report.res_T_compat <= tol;
}

} // namespace stepanov
