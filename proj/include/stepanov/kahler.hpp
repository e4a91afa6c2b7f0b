#pragma once

#include "stepanov/curvature.hpp"

namespace stepanov {

constexpr double kStructureTolExact = 1e-8;
constexpr double kStructureTolFd = 1e-4;

// Residual diagnostics for the structure axioms (F^2 = -I, g-antisymmetry,
// nabla F = 0) and the hybrid identities they imply for g, Ric and T.
struct KahlerReport {
    bool applicable = false; // false when the manifest carries no F
    double res_f_square = 0.0;
    double res_compat = 0.0;
    double res_parallel = 0.0;
    double res_g_hybrid = 0.0;
    double res_ricci_hybrid = 0.0;
    double res_T_hybrid = 0.0;
    double res_T_compat = 0.0;
    bool is_kahler = false;
};

// All seven residuals are reported even when the axioms fail; the hybrid
// identities have diagnostic value on near-Kähler inputs.
KahlerReport check_structure(const PointJets& jets, const ConnectionJet& conn,
                             const CurvaturePack& cp, double tol = kStructureTolExact);

// Gate for the theorem verifiers: structure axioms and the T identities must
// hold. False when the report is not applicable.
bool theorem_preconditions(const KahlerReport& report, double tol);

} // namespace stepanov
