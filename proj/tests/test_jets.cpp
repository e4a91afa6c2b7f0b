#include <doctest.h>

#include <cmath>

#include "stepanov/jets.hpp"
#include "stepanov/zoo.hpp"

using namespace stepanov;

namespace {

MetricManifest sphere_manifest() {
    return manifest_from_json_text(R"json({
      "name": "round-sphere",
      "dim": 2,
      "coords": ["theta", "phi"],
      "signature": [1, 1],
      "domain": [[0.3, 2.8], [-3, 3]],
      "metric": {"1,1": "1", "2,2": "sin(theta)^2"}
    })json");
}

} // namespace

TEST_CASE("expression jets carry exact component partials") {
    MetricManifest m = sphere_manifest();
    Eigen::Vector2d p(1.0, 0.5);
    PointJets pj = metric_jet(m, p);
    const MetricJet& j = pj.metric;
    CHECK(j.order == 3);
    CHECK(j.g({0, 0}) == doctest::Approx(1.0));
    CHECK(j.g({1, 1}) == doctest::Approx(std::sin(1.0) * std::sin(1.0)));
    CHECK(j.g({0, 1}) == doctest::Approx(0.0));
    // d_theta g_phiphi = 2 sin cos, d^2 = 2 cos(2 theta)
    CHECK(j.dg({1, 1, 0}) == doctest::Approx(2.0 * std::sin(1.0) * std::cos(1.0)).epsilon(1e-12));
    CHECK(j.d2g({1, 1, 0, 0}) == doctest::Approx(2.0 * std::cos(2.0)).epsilon(1e-12));
    CHECK(j.dg({1, 1, 1}) == doctest::Approx(0.0));
    CHECK_FALSE(pj.structure.has_value());
}

TEST_CASE("potential jets reduce to the identity for the flat potential") {
    Expression K = parse_expression("x1^2 + y1^2 + x2^2 + y2^2");
    std::vector<std::string> coords = {"x1", "x2", "y1", "y2"};
    Eigen::Vector4d p(0.2, -0.1, 0.3, 0.05);
    PointJets pj = potential_metric_jet(K, coords, p);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(pj.metric.g({i, j}) == doctest::Approx(i == j ? 1.0 : 0.0));
    CHECK(max_abs(pj.metric.dg) < 1e-14);
    REQUIRE(pj.structure.has_value());
    CHECK(max_abs(pj.structure->F - canonical_structure(4)) == 0.0);
    CHECK(max_abs(pj.structure->dF) == 0.0);
}

TEST_CASE("finite-difference jets approximate the exact ones") {
    MetricManifest m = sphere_manifest();
    Eigen::Vector2d p(1.1, 0.2);
    MetricJet exact = metric_jet(m, p).metric;
    MetricJet fd = finite_difference_jet(metric_function(m), p, 3);
    CHECK(max_abs(fd.g - exact.g) < 1e-12);
    CHECK(max_abs(fd.dg - exact.dg) < 1e-8);
    CHECK(max_abs(fd.d2g - exact.d2g) < 1e-6);
    CHECK(max_abs(fd.d3g - exact.d3g) < 1e-3);
}

TEST_CASE("metric_function enforces the chart domain") {
    MetricManifest m = sphere_manifest();
    auto fn = metric_function(m);
    Eigen::Vector2d outside(0.0, 0.0);
    CHECK_THROWS_AS(fn(outside), DomainError);
}

TEST_CASE("signature validation catches a wrong declaration") {
    MetricManifest m = sphere_manifest();
    CHECK_NOTHROW(validate_signature(m));
    m.signature = {1, -1};
    CHECK_THROWS_AS(validate_signature(m), ManifestError);
}

TEST_CASE("metric_signature orders signs by ascending eigenvalue") {
    Eigen::Matrix2d gm;
    gm << -2.0, 0.0, 0.0, 3.0;
    Tensor g = Tensor::from_matrix(gm, Variance::Co, Variance::Co);
    CHECK(metric_signature(g) == std::vector<int>{-1, 1});
}

TEST_CASE("degenerate and non-metric inputs are refused") {
    MetricManifest m = manifest_from_json_text(R"json({
      "name": "degenerate",
      "dim": 2,
      "coords": ["x", "y"],
      "signature": [1, 1],
      "domain": [[-1, 1], [-1, 1]],
      "metric": {"1,1": "x", "2,2": "1"}
    })json");
    Eigen::Vector2d p(0.0, 0.0);
    CHECK_THROWS_AS(metric_jet(m, p), DegenerateMetricError);

    Expression K = parse_expression("-(x1^2 + y1^2 + x2^2 + y2^2)");
    std::vector<std::string> coords = {"x1", "x2", "y1", "y2"};
    Eigen::Vector4d q(0.0, 0.0, 0.0, 0.0);
    CHECK_THROWS_AS(potential_metric_jet(K, coords, q), NotAMetricError);
}

TEST_CASE("inverse_metric round-trips against g") {
    MetricManifest m = sphere_manifest();
    Eigen::Vector2d p(0.9, -0.4);
    Tensor g = metric_jet(m, p).metric.g;
    Tensor gi = inverse_metric(g);
    Eigen::MatrixXd prod = gi.as_matrix() * g.as_matrix();
    CHECK((prod - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(gi.slots()[0] == Variance::Contra);
    CHECK(gi.slots()[1] == Variance::Contra);
}

TEST_CASE("canonical structure squares to minus the identity and needs even dim") {
    Tensor F = canonical_structure(6);
    Eigen::MatrixXd f = F.as_matrix();
    CHECK((f * f + Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(canonical_structure(3), StructuralError);
}
