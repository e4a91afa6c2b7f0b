// Acceptance gate: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "stepanov/classify.hpp"
#include "stepanov/curvature.hpp"
#include "stepanov/kahler.hpp"
#include "stepanov/zoo.hpp"

#ifndef STEPANOV_CLI_PATH
#error "STEPANOV_CLI_PATH must point at the built command-line binary"
#endif

using namespace stepanov;

namespace {

int g_failures = 0;

void report(int num, const std::string& title, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << num << " (" << title << "): " << detail
              << "\n";
    if (!pass) ++g_failures;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string cli_output(const std::string& args, int& exit_code) {
    const std::string cmd = std::string(STEPANOV_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    if (!pipe) {
        exit_code = -1;
        return out;
    }
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    int status = pclose(pipe);
    exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

Tensor cotensor(int dim, const Eigen::VectorXd& v) {
    Tensor t(dim, {Variance::Co});
    t.data() = v;
    return t;
}

// criterion 1: contracted-Bianchi divergence on every exact-jet catalog metric
void criterion1() {
    const double t0 = now_seconds();
    double worst = 0.0;
    for (const ZooEntry& e : zoo_list()) {
        for (const auto& p : sample_points(e.manifest, 9, 42)) {
            CurvaturePack cp = curvature(metric_jet(e.manifest, p).metric);
            worst = std::max(worst, max_abs(divergence_T(cp)));
        }
    }
    const double dt = now_seconds() - t0;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "worst divergence %.3e (< 1e-9), runtime %.2fs (< 1s)",
                  worst, dt);
    report(1, "divergence identity", worst < 1e-9 && dt < 1.0, detail);
}

// criterion 2: structure-axiom and hybrid-identity residuals, plus the negative control
void criterion2() {
    double worst = 0.0;
    for (const char* name :
         {"flat-C2", "flat-pseudo-C2", "cp1-fs", "cp2-fs", "kahler-nonEinstein"}) {
        const ZooEntry* e = zoo_find(name);
        for (const auto& p : sample_points(e->manifest, 5, 42)) {
            PointJets pj = metric_jet(e->manifest, p);
            KahlerReport r = check_structure(pj, christoffel(pj.metric), curvature(pj.metric));
            for (double v : {r.res_f_square, r.res_compat, r.res_parallel, r.res_g_hybrid,
                             r.res_ricci_hybrid, r.res_T_hybrid, r.res_T_compat})
                worst = std::max(worst, v);
        }
    }
    const ZooEntry* s4 = zoo_find("s4-like-nonkahler");
    Eigen::VectorXd p = sample_points(s4->manifest, 2, 42)[1];
    PointJets pj = metric_jet(s4->manifest, p);
    KahlerReport neg = check_structure(pj, christoffel(pj.metric), curvature(pj.metric));
    const double margin = 1e3 * kStructureTolExact;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "worst positive residual %.3e (< 1e-9); control res_parallel %.3e (> %.0e)",
                  worst, neg.res_parallel, margin);
    report(2, "structure identity suite", worst < 1e-9 && neg.res_parallel > margin, detail);
}

// criterion 3: linear-derivative class fits on planted instances, dims 4 and 6
void criterion3() {
    const double t0 = now_seconds();
    double worst = 0.0;
    for (int dim : {4, 6}) {
        for (int t = 0; t < 100; ++t) {
            AlgebraicInstance inst =
                generate_instance(dim, InstanceKind::Omega2Star, 1000 + static_cast<std::uint64_t>(t));
            Theorem1Report rep = verify_theorem1(inst);
            worst = std::max(worst, rep.fit.rel_residual);
            if (!rep.pass) worst = std::max(worst, 1.0);
        }
    }
    const double dt = now_seconds() - t0;
    char detail[160];
    std::snprintf(detail, sizeof(detail), "worst fit residual %.3e (< 1e-8), runtime %.2fs (< 10s)",
                  worst, dt);
    report(3, "derivative-form theorem", worst < 1e-8 && dt < 10.0, detail);
}

// criterion 4: four-vector class maps into the two-vector class via differences
void criterion4() {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t)
        worst = std::max(worst, verify_eq16(build_omega3star_instance(4, 2000 + static_cast<std::uint64_t>(t))));
    char detail[96];
    std::snprintf(detail, sizeof(detail), "worst substitution residual %.3e (< 1e-9)", worst);
    report(4, "vector correspondence", worst < 1e-9, detail);
}

// criterion 5: Einstein entries are members with vanishing derivatives; the
// perturbed potential is a non-member at generic points
void criterion5() {
    bool pass = true;
    double worst_norm = 0.0;
    for (const char* name : {"cp1-fs", "cp2-fs"}) {
        const ZooEntry* e = zoo_find(name);
        auto pts = sample_points(e->manifest, 9, 42);
        Theorem2Report rep = verify_theorem2(e->manifest, pts, kClassTolExact);
        if (!rep.pass) pass = false;
        for (const auto& rec : rep.points) {
            if (!rec.omega2_member || !rec.omega3_member) pass = false;
            worst_norm = std::max({worst_norm, rec.dT_norm, rec.dricci_norm});
        }
    }
    if (worst_norm >= 1e-9) pass = false;
    const ZooEntry* ne = zoo_find("kahler-nonEinstein");
    auto pts = sample_points(ne->manifest, 9, 42);
    FieldReport fr = classify_field(ne->manifest, pts, kClassTolExact);
    int nonmember = 0;
    for (const auto& rec : fr.points)
        if (!rec.fits[static_cast<int>(ClassId::Omega2)].member) ++nonmember;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "worst parallel-derivative norm %.3e (< 1e-9); non-members %d/9 (>= 8)",
                  worst_norm, nonmember);
    report(5, "parallel-T equivalence", pass && nonmember >= 8, detail);
}

// criterion 6: every constrained instance of the narrow extended class fits the wide one
void criterion6() {
    double worst = 0.0;
    bool pass = true;
    for (int dim : {4, 6}) {
        Theorem3Report rep = verify_theorem3(dim, 100, 3000, kClassTolExact);
        worst = std::max(worst, rep.max_rel_residual);
        if (!rep.pass) pass = false;
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "worst containment residual %.3e (< 1e-8)", worst);
    report(6, "class containment", pass && worst < 1e-8, detail);
}

// criterion 7: plant-and-recover for every class with unknowns + the degenerate flag
void criterion7() {
    const int n = 4;
    double worst = 0.0;
    bool pass = true;
    for (int s = 0; s < 50; ++s) {
        const std::uint64_t seed = 4000 + static_cast<std::uint64_t>(s);
        AlgebraicInstance bg = generate_instance(n, InstanceKind::Unconstrained, seed);
        SplitMix64 rng(seed * 7919 + 13);
        auto rand_vec = [&] {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v(i) = rng.normal();
            return v;
        };
        auto check_fit = [&](ClassId id, const Tensor& D,
                             const std::vector<std::pair<std::string, Eigen::VectorXd>>& planted) {
            ClassFit fit = classify(id, bg.g, &bg.F, bg.T, D);
            if (fit.rank != fit.dof) return; // recovery asserted only at full rank
            if (!fit.member) pass = false;
            for (const auto& [name, v] : planted) {
                double err = (fit.vectors.at(name) - v).norm();
                worst = std::max(worst, err);
                if (err > 1e-9) pass = false;
            }
        };

        { // trace form: a_k g_ij + b_i g_jk + b_j g_ik
            Eigen::VectorXd a = rand_vec(), b = rand_vec();
            Tensor bp = outer(cotensor(n, b), bg.g);
            Tensor D = outer(bg.g, cotensor(n, a)) + bp + transpose_slots(bp, {1, 0, 2});
            check_fit(ClassId::Omega3, D, {{"a", a}, {"b", b}});
        }
        { // cyclic form: plant D whose cyclic sum matches the class equation
            Eigen::VectorXd lambda = rand_vec(), mu = rand_vec();
            Tensor D = outer(bg.T, cotensor(n, lambda)) + outer(bg.g, cotensor(n, mu));
            check_fit(ClassId::Omega1Star, D, {{"lambda", lambda}, {"mu", mu}});
        }
        { // antisymmetrized linear form: planted by the instance generator
            AlgebraicInstance inst = generate_instance(n, InstanceKind::Omega2Star, seed);
            ClassFit fit = classify(ClassId::Omega2Star, inst.g, &inst.F, inst.T, inst.D);
            if (fit.rank == fit.dof) {
                for (const char* name : {"rho", "sigma"}) {
                    double err = (fit.vectors.at(name) - inst.planted.at(name)).norm();
                    worst = std::max(worst, err);
                    if (err > 1e-9) pass = false;
                }
            }
        }
        { // four-vector form: D assembled directly from the class equation
            AlgebraicInstance inst = build_omega3star_instance(n, seed);
            ClassFit fit = classify(ClassId::Omega3Star, inst.g, &inst.F, inst.T, inst.D);
            if (fit.rank == fit.dof) {
                for (const char* name : {"phi", "gamma", "eta", "chi"}) {
                    double err = (fit.vectors.at(name) - inst.planted.at(name)).norm();
                    worst = std::max(worst, err);
                    if (err > 1e-9) pass = false;
                }
            }
        }
    }
    // degenerate T = c g: the two column families coincide and the rank drops to n
    AlgebraicInstance bg = generate_instance(n, InstanceKind::Omega2Star, 4999);
    Tensor t = bg.g;
    t *= 3.0;
    ClassFit deg = classify(ClassId::Omega2Star, bg.g, &bg.F, t, bg.D);
    if (deg.rank != n || !deg.rank_deficient) pass = false;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "worst vector recovery error %.3e (< 1e-9); degenerate rank %d/%d flagged",
                  worst, deg.rank, deg.dof);
    report(7, "plant and recover", pass, detail);
}

// criterion 8: exact-jet vs finite-difference agreement on every catalog metric
void criterion8() {
    double worst_r = 0.0, worst_ric = 0.0, worst_dT = 0.0;
    for (const ZooEntry& e : zoo_list()) {
        for (const auto& p : sample_points(e.manifest, 2, 42)) {
            CurvaturePack exact = curvature(metric_jet(e.manifest, p).metric);
            CurvaturePack fd = curvature(finite_difference_jet(metric_function(e.manifest), p, 3));
            worst_r = std::max(worst_r, std::abs(fd.scalar - exact.scalar));
            worst_ric = std::max(worst_ric, max_abs(fd.ricci - exact.ricci));
            worst_dT = std::max(worst_dT, max_abs(fd.dT - exact.dT));
        }
    }
    bool pass = worst_r < 1e-5 && worst_ric < 1e-5 && worst_dT < 1e-5;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "max |dR| %.3e, |dRic| %.3e, |d(nabla T)| %.3e (all < 1e-5)", worst_r, worst_ric,
                  worst_dT);
    report(8, "independent-pipeline agreement", pass, detail);
}

// criterion 9: conserved quantities along geodesics on the Fubini-Study entries
void criterion9() {
    double worst_killing = 0.0, worst_speed = 0.0;
    for (const char* name : {"cp1-fs", "cp2-fs"}) {
        const ZooEntry* e = zoo_find(name);
        SplitMix64 rng(77);
        Eigen::VectorXd x0 = e->manifest.centroid();
        for (int trial = 0; trial < 3; ++trial) {
            Eigen::VectorXd v0(e->manifest.dim);
            for (int i = 0; i < e->manifest.dim; ++i) v0(i) = rng.normal();
            v0.normalize();
            GeodesicTrace tr = geodesic_trace(e->manifest, x0, v0, 1.0, 256);
            worst_killing = std::max(worst_killing, killing_quadratic_drift(e->manifest, tr));
            worst_speed = std::max(worst_speed, speed_drift(e->manifest, tr));
        }
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "Ricci quadratic drift %.3e (< 1e-6); speed drift %.3e (< 1e-8)", worst_killing,
                  worst_speed);
    report(9, "geodesic conservation", worst_killing < 1e-6 && worst_speed < 1e-8, detail);
}

// criterion 10: byte-identical reports across consecutive runs
void criterion10() {
    int ec1 = -1, ec2 = -1;
    std::string a = cli_output("classify --zoo cp2-fs --seed 42 --format json", ec1);
    std::string b = cli_output("classify --zoo cp2-fs --seed 42 --format json", ec2);
    bool pass = ec1 == 0 && ec2 == 0 && !a.empty() && a == b;
    char detail[120];
    std::snprintf(detail, sizeof(detail), "exit codes %d/%d, outputs %s (%zu bytes)", ec1, ec2,
                  a == b ? "identical" : "differ", a.size());
    report(10, "determinism", pass, detail);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (g_failures == 0) {
        std::cout << "acceptance: all 10 criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << g_failures << " criteria failed\n";
    return 1;
}
