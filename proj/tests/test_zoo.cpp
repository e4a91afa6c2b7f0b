#include <doctest.h>

#include <cmath>
#include <set>

#include "stepanov/curvature.hpp"
#include "stepanov/kahler.hpp"
#include "stepanov/zoo.hpp"

using namespace stepanov;

TEST_CASE("catalog is non-empty, deterministic and findable by name") {
    const auto& entries = zoo_list();
    REQUIRE(entries.size() == 7);
    std::set<std::string> names;
    for (const auto& e : entries) {
        CHECK(names.insert(e.name).second); // unique
        const ZooEntry* found = zoo_find(e.name);
        REQUIRE(found != nullptr);
        CHECK(found->manifest_json == e.manifest_json);
    }
    CHECK(zoo_find("no-such-entry") == nullptr);
}

TEST_CASE("embedded manifests parse, round-trip and match their declared shape") {
    for (const auto& e : zoo_list()) {
        MetricManifest m = manifest_from_json_text(e.manifest_json);
        CHECK(m.name == e.name);
        CHECK(m.dim == e.manifest.dim);
        CHECK_NOTHROW(validate_signature(m));
        CHECK(m.has_structure() == e.expect_structure);
    }
}

TEST_CASE("constant-curvature entries reproduce their reference scalar") {
    for (const auto& e : zoo_list()) {
        if (!e.scalar_curvature) continue;
        for (const auto& p : sample_points(e.manifest, 3, 17)) {
            CurvaturePack cp = curvature(metric_jet(e.manifest, p).metric);
            INFO("entry ", e.name);
            CHECK(cp.scalar == doctest::Approx(*e.scalar_curvature).epsilon(1e-8));
        }
    }
}

TEST_CASE("Einstein entries satisfy Ric = lambda g pointwise") {
    for (const auto& e : zoo_list()) {
        if (!e.einstein_constant) continue;
        Eigen::VectorXd p = sample_points(e.manifest, 2, 23)[1];
        CurvaturePack cp = curvature(metric_jet(e.manifest, p).metric);
        Tensor resid = cp.ricci - *e.einstein_constant * cp.g;
        INFO("entry ", e.name);
        CHECK(max_abs(resid) < 1e-8);
    }
}

TEST_CASE("Kahler expectations hold at the chart centroid") {
    for (const auto& e : zoo_list()) {
        Eigen::VectorXd p = e.manifest.centroid();
        PointJets pj = metric_jet(e.manifest, p);
        KahlerReport r = check_structure(pj, christoffel(pj.metric), curvature(pj.metric));
        INFO("entry ", e.name);
        CHECK(r.applicable == e.expect_structure);
        CHECK(r.is_kahler == e.expect_kahler);
    }
}

TEST_CASE("cross-checked reference values survive a finite-difference recomputation") {
    for (const auto& e : zoo_list()) {
        if (e.provenance != Provenance::CrossChecked || !e.scalar_curvature) continue;
        Eigen::VectorXd p = sample_points(e.manifest, 2, 29)[1];
        MetricJet fd = finite_difference_jet(metric_function(e.manifest), p, 3);
        CurvaturePack cp = curvature(fd);
        INFO("entry ", e.name);
        CHECK(std::abs(cp.scalar - *e.scalar_curvature) < 1e-4);
    }
}

TEST_CASE("the quartic-perturbed potential is genuinely non-Einstein") {
    const ZooEntry* e = zoo_find("kahler-nonEinstein");
    REQUIRE(e != nullptr);
    Eigen::VectorXd origin = e->manifest.centroid();
    CurvaturePack at_origin = curvature(metric_jet(e->manifest, origin).metric);
    CHECK(at_origin.scalar == doctest::Approx(-4.0).epsilon(1e-10)); // hand-computed
    Tensor resid = at_origin.ricci - (at_origin.scalar / 4.0) * at_origin.g;
    CHECK(max_abs(resid) > 1e-2);
    // nabla T vanishes at the symmetric center; probe a generic point instead
    Eigen::VectorXd p = sample_points(e->manifest, 2, 13)[1];
    CurvaturePack cp = curvature(metric_jet(e->manifest, p).metric);
    CHECK(max_abs(cp.dT) > 1e-2);
}

TEST_CASE("two charts of the same line agree up to the potential normalization") {
    // cp1-fs carries the conformal factor 4/(1+r^2)^2; the potential chart of
    // the same space via log(1+x^2+y^2) scales the metric by 1/4 and the
    // scalar curvature by 4.
    MetricManifest pot = manifest_from_json_text(R"json({
      "name": "cp1-potential",
      "dim": 2,
      "coords": ["x1", "y1"],
      "signature": [1, 1],
      "domain": [[-2, 2], [-2, 2]],
      "potential": "log(1 + x1^2 + y1^2)"
    })json");
    Eigen::Vector2d p(0.4, -0.3);
    CurvaturePack a = curvature(metric_jet(zoo_find("cp1-fs")->manifest, p).metric);
    CurvaturePack b = curvature(metric_jet(pot, p).metric);
    CHECK(b.scalar == doctest::Approx(4.0 * a.scalar).epsilon(1e-10));
    Tensor scaled = b.g;
    scaled *= 4.0;
    CHECK(max_abs(scaled - a.g) < 1e-12);
}
