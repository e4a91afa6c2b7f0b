#include "stepanov/commands.hpp"

#include <cstdio>
#include <sstream>

#include "stepanov/classify.hpp"
#include "stepanov/parallel.hpp"
#include "stepanov/report.hpp"
#include "stepanov/zoo.hpp"

namespace stepanov {

namespace {

MetricManifest load_source(const RunConfig& cfg) {
    if (!cfg.manifest_path.empty() && !cfg.zoo_name.empty())
        throw ManifestError("give either a manifest path or a zoo name, not both");
    if (!cfg.manifest_path.empty()) return load_manifest_file(cfg.manifest_path);
    if (!cfg.zoo_name.empty()) {
        const ZooEntry* e = zoo_find(cfg.zoo_name);
        if (!e) throw ManifestError("unknown zoo entry '" + cfg.zoo_name + "'");
        return e->manifest;
    }
    throw ManifestError("a manifest path or zoo name is required");
}

double resolved_tol(const RunConfig& cfg, double exact_default, double fd_default) {
    if (cfg.use_fd) return cfg.fd_tol >= 0 ? cfg.fd_tol : fd_default;
    return cfg.tol >= 0 ? cfg.tol : exact_default;
}

Json config_echo(const RunConfig& cfg, double tol) {
    Json j = Json::object();
    j.set("command", Json::str(cfg.command));
    if (!cfg.manifest_path.empty()) j.set("manifest", Json::str(cfg.manifest_path));
    if (!cfg.zoo_name.empty()) j.set("zoo", Json::str(cfg.zoo_name));
    j.set("points", Json::integer(cfg.points));
    j.set("seed", Json::integer(static_cast<long long>(cfg.seed)));
    j.set("tol", Json::real(tol));
    j.set("finite_differences", Json::boolean(cfg.use_fd));
    if (cfg.command == "verify") {
        j.set("theorem", Json::integer(cfg.theorem));
        j.set("trials", Json::integer(cfg.trials));
        j.set("dim", Json::integer(cfg.dim));
    }
    j.set("format", Json::str(cfg.format));
    return j;
}

Json report_shell(const RunConfig& cfg, double tol) {
    Json j = Json::object();
    j.set("schema_version", Json::integer(kSchemaVersion));
    Json tool = Json::object();
    tool.set("name", Json::str(kToolName));
    tool.set("version", Json::str(kToolVersion));
    j.set("tool", std::move(tool));
    j.set("config", config_echo(cfg, tol));
    return j;
}

Json kahler_json(const KahlerReport& k) {
    Json j = Json::object();
    j.set("applicable", Json::boolean(k.applicable));
    if (k.applicable) {
        j.set("res_f_square", Json::real(k.res_f_square));
        j.set("res_compat", Json::real(k.res_compat));
        j.set("res_parallel", Json::real(k.res_parallel));
        j.set("res_g_hybrid", Json::real(k.res_g_hybrid));
        j.set("res_ricci_hybrid", Json::real(k.res_ricci_hybrid));
        j.set("res_T_hybrid", Json::real(k.res_T_hybrid));
        j.set("res_T_compat", Json::real(k.res_T_compat));
        j.set("is_kahler", Json::boolean(k.is_kahler));
    }
    return j;
}

Json fit_json(const ClassFit& f) {
    Json j = Json::object();
    j.set("class", Json::str(class_name(f.class_id)));
    j.set("applicable", Json::boolean(f.applicable));
    if (!f.applicable) return j;
    j.set("member", Json::boolean(f.member));
    j.set("rel_residual", Json::real(f.rel_residual));
    j.set("rank", Json::integer(f.rank));
    j.set("dof", Json::integer(f.dof));
    j.set("rank_deficient", Json::boolean(f.rank_deficient));
    Json vecs = Json::object();
    for (const auto& [name, v] : f.vectors) vecs.set(name, Json::reals(v));
    j.set("vectors", std::move(vecs));
    return j;
}

std::string fmt(double v) { return format_real(v); }

void text_kahler(std::ostringstream& os, const KahlerReport& k) {
    if (!k.applicable) {
        os << "  structure: not applicable (no F)\n";
        return;
    }
    os << "  structure: is_kahler=" << (k.is_kahler ? "yes" : "no")
       << "  F^2+I=" << fmt(k.res_f_square) << "  compat=" << fmt(k.res_compat)
       << "  nablaF=" << fmt(k.res_parallel) << "\n"
       << "  hybrid: g=" << fmt(k.res_g_hybrid) << "  ricci=" << fmt(k.res_ricci_hybrid)
       << "  T=" << fmt(k.res_T_hybrid) << "  T_compat=" << fmt(k.res_T_compat) << "\n";
}

std::string point_str(const Eigen::VectorXd& p) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += fmt(p(i));
    }
    return s + ")";
}

} // namespace

RunResult run_checks(const RunConfig& cfg) {
    MetricManifest m = load_source(cfg);
    validate_signature(m);
    const double tol = resolved_tol(cfg, kStructureTolExact, kStructureTolFd);
    auto points = sample_points(m, cfg.points, cfg.seed);

    struct Row {
        Eigen::VectorXd point;
        KahlerReport kahler;
        double scalar = 0.0, div_T = 0.0, trace = 0.0;
    };
    std::vector<Row> rows(points.size());
    parallel_for(static_cast<int>(points.size()), [&](int i) {
        PointJets pj = metric_jet(m, points[static_cast<std::size_t>(i)], 3);
        if (cfg.use_fd)
            pj.metric = finite_difference_jet(metric_function(m), points[static_cast<std::size_t>(i)], 3);
        ConnectionJet conn = christoffel(pj.metric);
        CurvaturePack cp = curvature(pj.metric);
        Row& r = rows[static_cast<std::size_t>(i)];
        r.point = points[static_cast<std::size_t>(i)];
        r.kahler = check_structure(pj, conn, cp, tol);
        r.scalar = cp.scalar;
        r.div_T = max_abs(divergence_T(cp));
        r.trace = trace_identity_residual(cp);
    });

    bool failed = false;
    for (const auto& r : rows) {
        if (r.div_T > tol || r.trace > tol) failed = true;
        if (r.kahler.applicable && !r.kahler.is_kahler) failed = true;
    }

    Json report = report_shell(cfg, tol);
    Json pts = Json::array();
    double worst_div = 0.0, worst_trace = 0.0;
    for (const auto& r : rows) {
        Json p = Json::object();
        p.set("point", Json::reals(r.point));
        p.set("scalar", Json::real(r.scalar));
        p.set("div_T", Json::real(r.div_T));
        p.set("trace_residual", Json::real(r.trace));
        p.set("kahler", kahler_json(r.kahler));
        pts.push(std::move(p));
        worst_div = std::max(worst_div, r.div_T);
        worst_trace = std::max(worst_trace, r.trace);
    }
    report.set("points", std::move(pts));
    Json agg = Json::object();
    agg.set("worst_div_T", Json::real(worst_div));
    agg.set("worst_trace_residual", Json::real(worst_trace));
    agg.set("pass", Json::boolean(!failed));
    report.set("aggregates", std::move(agg));
    report.set("warnings", Json::array());

    RunResult res;
    res.exit_code = failed ? kExitToleranceFailure : kExitOk;
    if (cfg.format == "json") {
        res.output = report.dump();
        return res;
    }
    std::ostringstream os;
    os << kToolName << " checks: " << m.name << "  (" << rows.size() << " points, tol=" << fmt(tol)
       << ")\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        os << "point " << i << " " << point_str(r.point) << "\n"
           << "  scalar=" << fmt(r.scalar) << "  div_T=" << fmt(r.div_T)
           << "  trace_residual=" << fmt(r.trace) << "\n";
        text_kahler(os, r.kahler);
    }
    os << "result: " << (failed ? "FAIL" : "PASS") << "\n";
    res.output = os.str();
    return res;
}

RunResult run_classify(const RunConfig& cfg) {
    MetricManifest m = load_source(cfg);
    validate_signature(m);
    const double tol = resolved_tol(cfg, kClassTolExact, kClassTolFd);
    auto points = sample_points(m, cfg.points, cfg.seed);
    FieldReport fr = classify_field(m, points, tol, cfg.use_fd);

    Json report = report_shell(cfg, tol);
    Json pts = Json::array();
    for (const auto& rec : fr.points) {
        Json p = Json::object();
        p.set("point", Json::reals(rec.point));
        p.set("scalar", Json::real(rec.scalar));
        p.set("dT_norm", Json::real(rec.dT_norm));
        p.set("div_T", Json::real(rec.div_T));
        p.set("trace_residual", Json::real(rec.trace_residual));
        p.set("kahler", kahler_json(rec.kahler));
        Json fits = Json::array();
        for (const auto& f : rec.fits) fits.push(fit_json(f));
        p.set("fits", std::move(fits));
        pts.push(std::move(p));
    }
    report.set("points", std::move(pts));
    Json agg = Json::object();
    Json mem = Json::object();
    Json worst = Json::object();
    for (int c = 0; c < kClassCount; ++c) {
        const char* name = class_name(static_cast<ClassId>(c));
        int v = fr.aggregate_member[static_cast<std::size_t>(c)];
        mem.set(name, v < 0 ? Json::str("n/a") : Json::boolean(v == 1));
        worst.set(name, Json::real(fr.worst_residual[static_cast<std::size_t>(c)]));
    }
    agg.set("member", std::move(mem));
    agg.set("worst_residual", std::move(worst));
    report.set("aggregates", std::move(agg));
    Json warn = Json::array();
    for (const auto& w : fr.warnings) warn.push(Json::str(w));
    report.set("warnings", std::move(warn));

    RunResult res;
    if (cfg.format == "json") {
        res.output = report.dump();
        return res;
    }
    std::ostringstream os;
    os << kToolName << " classify: " << m.name << "  (" << fr.points.size()
       << " points, tol=" << fmt(tol) << ")\n";
    for (std::size_t i = 0; i < fr.points.size(); ++i) {
        const PointRecord& rec = fr.points[i];
        os << "point " << i << " " << point_str(rec.point) << "\n"
           << "  scalar=" << fmt(rec.scalar) << "  |dT|=" << fmt(rec.dT_norm)
           << "  div_T=" << fmt(rec.div_T) << "\n";
        text_kahler(os, rec.kahler);
        for (const auto& f : rec.fits) {
            os << "  " << class_name(f.class_id) << ": ";
            if (!f.applicable) {
                os << "n/a\n";
                continue;
            }
            os << (f.member ? "member" : "non-member") << "  rel=" << fmt(f.rel_residual)
               << "  rank=" << f.rank << "/" << f.dof << "\n";
        }
    }
    os << "aggregate:";
    for (int c = 0; c < kClassCount; ++c) {
        int v = fr.aggregate_member[static_cast<std::size_t>(c)];
        os << "  " << class_name(static_cast<ClassId>(c)) << "="
           << (v < 0 ? "n/a" : (v == 1 ? "member" : "non-member"));
    }
    os << "\n";
    for (const auto& w : fr.warnings) os << "warning: " << w << "\n";
    res.output = os.str();
    return res;
}

namespace {

RunResult verify_theorem1_cmd(const RunConfig& cfg, double tol) {
    std::vector<Theorem1Report> reps(static_cast<std::size_t>(cfg.trials));
    std::vector<double> eq16(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, [&](int t) {
        AlgebraicInstance inst =
            generate_instance(cfg.dim, InstanceKind::Omega2Star, cfg.seed + static_cast<std::uint64_t>(t));
        reps[static_cast<std::size_t>(t)] = verify_theorem1(inst, tol);
        AlgebraicInstance i3 = build_omega3star_instance(cfg.dim, cfg.seed + static_cast<std::uint64_t>(t));
        eq16[static_cast<std::size_t>(t)] = verify_eq16(i3);
    });
    double max_fit = 0.0, max13 = 0.0, max14 = 0.0, max15 = 0.0, max16 = 0.0;
    bool pass = true;
    for (int t = 0; t < cfg.trials; ++t) {
        const Theorem1Report& r = reps[static_cast<std::size_t>(t)];
        max_fit = std::max(max_fit, r.fit.rel_residual);
        max13 = std::max(max13, r.res13);
        max14 = std::max(max14, r.res14);
        max15 = std::max(max15, r.res15);
        max16 = std::max(max16, eq16[static_cast<std::size_t>(t)]);
        if (!r.pass) pass = false;
    }
    if (max16 > 1e-9) pass = false;

    const char* sign_note =
        "proof trace uses the consistent '+' sign in both symmetrized identities; "
        "one of them is printed with '-' in the source derivation";

    Json report = report_shell(cfg, tol);
    Json trials = Json::array();
    for (int t = 0; t < cfg.trials; ++t) {
        const Theorem1Report& r = reps[static_cast<std::size_t>(t)];
        Json j = Json::object();
        j.set("seed", Json::integer(static_cast<long long>(cfg.seed + static_cast<std::uint64_t>(t))));
        j.set("fit", fit_json(r.fit));
        j.set("res13", Json::real(r.res13));
        j.set("res14", Json::real(r.res14));
        j.set("res14_printed_sign", Json::real(r.res14_printed));
        j.set("res15", Json::real(r.res15));
        j.set("eq16_residual", Json::real(eq16[static_cast<std::size_t>(t)]));
        trials.push(std::move(j));
    }
    report.set("trials", std::move(trials));
    Json agg = Json::object();
    agg.set("max_fit_residual", Json::real(max_fit));
    agg.set("max_res13", Json::real(max13));
    agg.set("max_res14", Json::real(max14));
    agg.set("max_res15", Json::real(max15));
    agg.set("max_eq16_residual", Json::real(max16));
    agg.set("pass", Json::boolean(pass));
    report.set("aggregates", std::move(agg));
    Json warn = Json::array();
    warn.push(Json::str(sign_note));
    report.set("warnings", std::move(warn));

    RunResult res;
    res.exit_code = pass ? kExitOk : kExitToleranceFailure;
    if (cfg.format == "json") {
        res.output = report.dump();
        return res;
    }
    std::ostringstream os;
    os << kToolName << " verify theorem 1: dim=" << cfg.dim << " trials=" << cfg.trials
       << " seed=" << cfg.seed << "\n"
       << "max fit residual:   " << fmt(max_fit) << "\n"
       << "max trace residuals: res13=" << fmt(max13) << " res14=" << fmt(max14)
       << " res15=" << fmt(max15) << "\n"
       << "max vector-correspondence residual: " << fmt(max16) << "\n"
       << "warning: " << sign_note << "\n"
       << "result: " << (pass ? "PASS" : "FAIL") << "\n";
    res.output = os.str();
    return res;
}

RunResult verify_theorem2_cmd(const RunConfig& cfg, double tol) {
    MetricManifest m = load_source(cfg);
    validate_signature(m);
    auto points = sample_points(m, cfg.points, cfg.seed);
    Theorem2Report rep = verify_theorem2(m, points, tol);

    Json report = report_shell(cfg, tol);
    Json pts = Json::array();
    double max_dT = 0.0, max_dric = 0.0;
    for (const auto& rec : rep.points) {
        Json j = Json::object();
        j.set("point", Json::reals(rec.point));
        j.set("omega2_member", Json::boolean(rec.omega2_member));
        j.set("omega3_member", Json::boolean(rec.omega3_member));
        j.set("dT_norm", Json::real(rec.dT_norm));
        j.set("dricci_norm", Json::real(rec.dricci_norm));
        j.set("consistent", Json::boolean(rec.consistent));
        pts.push(std::move(j));
        max_dT = std::max(max_dT, rec.dT_norm);
        max_dric = std::max(max_dric, rec.dricci_norm);
    }
    report.set("points", std::move(pts));
    Json agg = Json::object();
    agg.set("max_dT_norm", Json::real(max_dT));
    agg.set("max_dricci_norm", Json::real(max_dric));
    agg.set("pass", Json::boolean(rep.pass));
    report.set("aggregates", std::move(agg));
    report.set("warnings", Json::array());

    RunResult res;
    res.exit_code = rep.pass ? kExitOk : kExitToleranceFailure;
    if (cfg.format == "json") {
        res.output = report.dump();
        return res;
    }
    std::ostringstream os;
    os << kToolName << " verify theorem 2: " << m.name << "  (" << rep.points.size()
       << " points, tol=" << fmt(tol) << ")\n";
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        const auto& rec = rep.points[i];
        os << "point " << i << ": Omega2=" << (rec.omega2_member ? "member" : "non-member")
           << " Omega3=" << (rec.omega3_member ? "member" : "non-member")
           << " |dT|=" << fmt(rec.dT_norm) << " |dRic|=" << fmt(rec.dricci_norm)
           << (rec.consistent ? "" : "  INCONSISTENT") << "\n";
    }
    os << "result: " << (rep.pass ? "PASS" : "FAIL") << "\n";
    res.output = os.str();
    return res;
}

RunResult verify_theorem3_cmd(const RunConfig& cfg, double tol) {
    Theorem3Report rep = verify_theorem3(cfg.dim, cfg.trials, cfg.seed, tol);

    Json report = report_shell(cfg, tol);
    Json trials = Json::array();
    for (const auto& t : rep.trials) {
        Json j = Json::object();
        j.set("seed", Json::integer(static_cast<long long>(t.seed)));
        j.set("instance_norm", Json::real(t.instance_norm));
        j.set("fit", fit_json(t.fit));
        trials.push(std::move(j));
    }
    report.set("trials", std::move(trials));
    Json agg = Json::object();
    agg.set("max_rel_residual", Json::real(rep.max_rel_residual));
    agg.set("pass", Json::boolean(rep.pass));
    report.set("aggregates", std::move(agg));
    report.set("warnings", Json::array());

    RunResult res;
    res.exit_code = rep.pass ? kExitOk : kExitToleranceFailure;
    if (cfg.format == "json") {
        res.output = report.dump();
        return res;
    }
    std::ostringstream os;
    os << kToolName << " verify theorem 3: dim=" << cfg.dim << " trials=" << cfg.trials
       << " seed=" << cfg.seed << "\n"
       << "max containing-class residual: " << fmt(rep.max_rel_residual) << "\n"
       << "result: " << (rep.pass ? "PASS" : "FAIL") << "\n";
    res.output = os.str();
    return res;
}

} // namespace

RunResult run_verify(const RunConfig& cfg) {
    const double tol = resolved_tol(cfg, kClassTolExact, kClassTolFd);
    switch (cfg.theorem) {
        case 1: return verify_theorem1_cmd(cfg, tol);
        case 2: return verify_theorem2_cmd(cfg, tol);
        case 3: return verify_theorem3_cmd(cfg, tol);
        default: throw Error("verify: --theorem must be 1, 2 or 3");
    }
}

std::string zoo_table() {
    std::ostringstream os;
    for (const auto& e : zoo_list()) {
        os << e.name;
        for (std::size_t i = e.name.size(); i < 22; ++i) os << ' ';
        os << "dim " << e.manifest.dim << "  " << e.description << "\n";
    }
    return os.str();
}

std::string zoo_export(const std::string& name) {
    const ZooEntry* e = zoo_find(name);
    if (!e) throw ManifestError("unknown zoo entry '" + name + "'");
    return e->manifest_json + std::string("\n");
}

} // namespace stepanov
