#pragma once

#include <optional>

#include "stepanov/manifest.hpp"
#include "stepanov/tensor.hpp"

namespace stepanov {

constexpr double kDegeneracyFloor = 1e-10;

// Metric components and coordinate partials at a point. Derivative slots are
// appended after the value slots: dg(i,j,k) = d_k g_ij and so on. Blocks above
// `order` are zero-sized placeholders.
struct MetricJet {
    int dim = 0;
    int order = 0;
    Eigen::VectorXd point;
    Tensor g{1, {}};
    Tensor dg{1, {}};
    Tensor d2g{1, {}};
    Tensor d3g{1, {}};
};

struct StructureJet {
    Tensor F{1, {}};  // F^h_i
    Tensor dF{1, {}}; // d_k F^h_i
};

struct PointJets {
    MetricJet metric;
    std::optional<StructureJet> structure;
};

// Jets from the manifest's source at p; exact (Taylor) for expression and
// potential sources, central differences for the adapter source.
PointJets metric_jet(const MetricManifest& m, const Eigen::VectorXd& p, int order = 3);

// Kahler metric of the real potential K with coordinates (x^1..x^m, y^1..y^m)
// and the canonical block structure.
PointJets potential_metric_jet(const Expression& K, const std::vector<std::string>& coords,
                               const Eigen::VectorXd& p, int order = 3);

// Central-difference jets around a black-box component function, step
// h = eps^(1/(k+2)) * max(1, |p_i|) per derivative order k.
MetricJet finite_difference_jet(const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& g_fn,
                                const Eigen::VectorXd& p, int order = 3);

// Eigenvalue signs of g (+1/-1 per eigenvalue, ascending eigenvalue order).
std::vector<int> metric_signature(const Tensor& g);

// Computed signature at the chart base point (centroid) must match the
// declaration up to reordering; throws ManifestError otherwise.
void validate_signature(const MetricManifest& m);

// Wrap a manifest as a black-box g(p) for the finite-difference path;
// checks the chart domain and throws DomainError outside it.
std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> metric_function(const MetricManifest& m);

Tensor inverse_metric(const Tensor& g);

// Canonical block affinor on (x^1..x^m, y^1..y^m): F(dx^a) = dy^a, F(dy^a) = -dx^a.
Tensor canonical_structure(int dim);

} // namespace stepanov
