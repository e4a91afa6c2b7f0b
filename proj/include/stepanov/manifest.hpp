#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stepanov/expression.hpp"

namespace stepanov {

// A chart-local metric description: name, coordinates, declared signature,
// chart domain, and exactly one component source. The samples adapter is an
// in-process source only and never appears in manifest files.
struct MetricManifest {
    enum class Source { Expressions, Potential, Adapter };

    std::string name;
    int dim = 0;
    std::vector<std::string> coords;
    std::vector<int> signature;                  // declared eigenvalue signs of g
    std::vector<std::array<double, 2>> domain;   // per-coordinate open interval

    Source source = Source::Expressions;
    std::map<std::pair<int, int>, Expression> metric;    // 0-based, upper triangle
    std::map<std::pair<int, int>, Expression> structure; // F^h_i, optional
    Expression potential;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> adapter;

    bool has_structure() const { return source == Source::Potential || !structure.empty(); }
    bool in_domain(const Eigen::VectorXd& p) const;
    Eigen::VectorXd centroid() const;
};

// JSON schema: {"name", "dim", "coords", "signature", "domain", one of
// "metric"/"potential", optional "structure"}. Component keys are 1-based
// "i,j". Unknown fields are rejected. Expression strings round-trip verbatim.
MetricManifest manifest_from_json_text(const std::string& text);
std::string manifest_to_json_text(const MetricManifest& m);
MetricManifest load_manifest_file(const std::string& path);

// First point is the domain centroid; the rest are drawn uniformly from the
// 10%-margin interior with the documented splitmix64 generator.
std::vector<Eigen::VectorXd> sample_points(const MetricManifest& m, int count, std::uint64_t seed);

} // namespace stepanov
