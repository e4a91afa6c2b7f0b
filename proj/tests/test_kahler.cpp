#include <doctest.h>

#include "stepanov/kahler.hpp"
#include "stepanov/zoo.hpp"

using namespace stepanov;

namespace {

KahlerReport report_for(const MetricManifest& m, const Eigen::VectorXd& p) {
    PointJets pj = metric_jet(m, p);
    ConnectionJet conn = christoffel(pj.metric);
    CurvaturePack cp = curvature(pj.metric);
    return check_structure(pj, conn, cp);
}

} // namespace

TEST_CASE("flat and Fubini-Study entries pass every structure axiom") {
    for (const char* name : {"flat-C2", "flat-pseudo-C2", "cp1-fs", "cp2-fs", "kahler-nonEinstein"}) {
        const ZooEntry* e = zoo_find(name);
        REQUIRE(e != nullptr);
        KahlerReport r = report_for(e->manifest, sample_points(e->manifest, 2, 3)[1]);
        INFO("entry ", name);
        CHECK(r.applicable);
        CHECK(r.is_kahler);
        CHECK(r.res_f_square < 1e-9);
        CHECK(r.res_compat < 1e-9);
        CHECK(r.res_parallel < 1e-9);
        CHECK(r.res_g_hybrid < 1e-9);
        CHECK(r.res_ricci_hybrid < 1e-9);
        CHECK(r.res_T_hybrid < 1e-9);
        CHECK(r.res_T_compat < 1e-9);
        CHECK(theorem_preconditions(r, kStructureTolExact));
    }
}

TEST_CASE("negative control: the block structure on the round sphere chart is not parallel") {
    const ZooEntry* e = zoo_find("s4-like-nonkahler");
    REQUIRE(e != nullptr);
    KahlerReport r = report_for(e->manifest, sample_points(e->manifest, 2, 3)[1]);
    CHECK(r.applicable);
    CHECK(r.res_f_square < 1e-12);   // the affinor itself is fine
    CHECK(r.res_compat < 1e-12);     // and metric-compatible
    CHECK(r.res_parallel > 1e-3);    // but nabla F does not vanish
    CHECK_FALSE(r.is_kahler);
    CHECK_FALSE(theorem_preconditions(r, kStructureTolExact));
}

TEST_CASE("manifests without a structure are reported not applicable") {
    const ZooEntry* e = zoo_find("flrw-dust");
    REQUIRE(e != nullptr);
    KahlerReport r = report_for(e->manifest, sample_points(e->manifest, 1, 3)[0]);
    CHECK_FALSE(r.applicable);
    CHECK_FALSE(r.is_kahler);
    CHECK_FALSE(theorem_preconditions(r, kStructureTolExact));
}
