#pragma once

#include <array>
#include <optional>

#include "stepanov/manifest.hpp"

namespace stepanov {

// How a reference value was obtained: exact by construction, or computed
// numerically and cross-checked against an independent finite-difference run.
enum class Provenance { ByConstruction, CrossChecked };

struct ZooEntry {
    std::string name;
    std::string description;
    std::string manifest_json; // source of truth; parses and round-trips
    MetricManifest manifest;
    std::optional<double> scalar_curvature; // constant R, when the space has one
    std::optional<double> einstein_constant; // lambda in Ric = lambda g
    Provenance provenance = Provenance::ByConstruction;
    bool expect_kahler = false;
    bool expect_structure = false; // carries an F at all
    // expected pointwise membership at generic points: 1 member, 0 non-member,
    // -1 not asserted / not applicable; indexed by ClassId order
    std::array<int, 8> expected_member{};
};

// Fixed catalog in deterministic order.
const std::vector<ZooEntry>& zoo_list();

// nullptr when the name is unknown.
const ZooEntry* zoo_find(const std::string& name);

} // namespace stepanov
