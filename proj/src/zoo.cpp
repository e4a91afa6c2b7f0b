#include "stepanov/zoo.hpp"

namespace stepanov {

namespace {

constexpr char kFlatC2[] = R"json({
  "name": "flat-C2",
  "dim": 4,
  "coords": ["x1", "x2", "y1", "y2"],
  "signature": [1, 1, 1, 1],
  "domain": [[-1, 1], [-1, 1], [-1, 1], [-1, 1]],
  "metric": {"1,1": "1", "2,2": "1", "3,3": "1", "4,4": "1"},
  "structure": {"3,1": "1", "4,2": "1", "1,3": "-1", "2,4": "-1"}
})json";

constexpr char kFlatPseudoC2[] = R"json({
  "name": "flat-pseudo-C2",
  "dim": 4,
  "coords": ["x1", "x2", "y1", "y2"],
  "signature": [1, -1, 1, -1],
  "domain": [[-1, 1], [-1, 1], [-1, 1], [-1, 1]],
  "metric": {"1,1": "1", "2,2": "-1", "3,3": "1", "4,4": "-1"},
  "structure": {"3,1": "1", "4,2": "1", "1,3": "-1", "2,4": "-1"}
})json";

constexpr char kCp1Fs[] = R"json({
  "name": "cp1-fs",
  "dim": 2,
  "coords": ["x", "y"],
  "signature": [1, 1],
  "domain": [[-2, 2], [-2, 2]],
  "metric": {"1,1": "4/(1 + x^2 + y^2)^2", "2,2": "4/(1 + x^2 + y^2)^2"},
  "structure": {"2,1": "1", "1,2": "-1"}
})json";

constexpr char kCp2Fs[] = R"json({
  "name": "cp2-fs",
  "dim": 4,
  "coords": ["x1", "x2", "y1", "y2"],
  "signature": [1, 1, 1, 1],
  "domain": [[-2, 2], [-2, 2], [-2, 2], [-2, 2]],
  "potential": "log(1 + x1^2 + y1^2 + x2^2 + y2^2)"
})json";

constexpr char kKahlerNonEinstein[] = R"json({
  "name": "kahler-nonEinstein",
  "dim": 4,
  "coords": ["x1", "x2", "y1", "y2"],
  "signature": [1, 1, 1, 1],
  "domain": [[-1, 1], [-1, 1], [-1, 1], [-1, 1]],
  "potential": "x1^2 + y1^2 + x2^2 + y2^2 + (x1^2 + y1^2)^2/4"
})json";

constexpr char kS4LikeNonKahler[] = R"json({
  "name": "s4-like-nonkahler",
  "dim": 4,
  "coords": ["x1", "x2", "y1", "y2"],
  "signature": [1, 1, 1, 1],
  "domain": [[0.2, 1.5], [0.2, 1.5], [0.2, 1.5], [0.2, 1.5]],
  "metric": {
    "1,1": "4/(1 + x1^2 + x2^2 + y1^2 + y2^2)^2",
    "2,2": "4/(1 + x1^2 + x2^2 + y1^2 + y2^2)^2",
    "3,3": "4/(1 + x1^2 + x2^2 + y1^2 + y2^2)^2",
    "4,4": "4/(1 + x1^2 + x2^2 + y1^2 + y2^2)^2"
  },
  "structure": {"3,1": "1", "4,2": "1", "1,3": "-1", "2,4": "-1"}
})json";

constexpr char kFlrwDust[] = R"json({
  "name": "flrw-dust",
  "dim": 4,
  "coords": ["t", "x", "y", "z"],
  "signature": [-1, 1, 1, 1],
  "domain": [[0.5, 2], [-1, 1], [-1, 1], [-1, 1]],
  "metric": {"1,1": "-1", "2,2": "t^(4/3)", "3,3": "t^(4/3)", "4,4": "t^(4/3)"}
})json";

ZooEntry make_entry(const char* json, const char* description,
                    std::optional<double> scalar, std::optional<double> lambda,
                    Provenance prov, bool kahler, bool structure,
                    std::array<int, 8> members) {
    ZooEntry e;
    e.manifest_json = json;
    e.manifest = manifest_from_json_text(json);
    e.name = e.manifest.name;
    e.description = description;
    e.scalar_curvature = scalar;
    e.einstein_constant = lambda;
    e.provenance = prov;
    e.expect_kahler = kahler;
    e.expect_structure = structure;
    e.expected_member = members;
    return e;
}

std::vector<ZooEntry> build_catalog() {
    std::vector<ZooEntry> v;
    const std::array<int, 8> all{1, 1, 1, 1, 1, 1, 1, 1};
    const std::array<int, 8> none_asserted{-1, -1, -1, -1, -1, -1, -1, -1};
    v.push_back(make_entry(kFlatC2, "flat complex plane, canonical structure", 0.0, 0.0,
                           Provenance::ByConstruction, true, true, all));
    v.push_back(make_entry(kFlatPseudoC2, "flat split-signature plane, compatible structure", 0.0,
                           0.0, Provenance::ByConstruction, true, true, all));
    v.push_back(make_entry(kCp1Fs, "Fubini-Study line, conformal chart", 2.0, 1.0,
                           Provenance::CrossChecked, true, true, all));
    v.push_back(make_entry(kCp2Fs, "Fubini-Study plane from its potential", 24.0, 6.0,
                           Provenance::CrossChecked, true, true, all));
    {
        std::array<int, 8> m = none_asserted;
        m[1] = 0; // Omega2
        m[2] = 0; // Omega3
        v.push_back(make_entry(kKahlerNonEinstein, "quartic-perturbed flat potential, not Einstein",
                               std::nullopt, std::nullopt, Provenance::CrossChecked, true, true, m));
    }
    v.push_back(make_entry(kS4LikeNonKahler, "round four-sphere chart with a block structure",
                           12.0, 3.0, Provenance::CrossChecked, false, true, all));
    {
        std::array<int, 8> m = none_asserted;
        m[1] = 0; // Omega2; pinned by golden output, not by theory
        v.push_back(make_entry(kFlrwDust, "spatially flat dust cosmology, no structure",
                               std::nullopt, std::nullopt, Provenance::CrossChecked, false, false, m));
    }
    return v;
}

} // namespace

const std::vector<ZooEntry>& zoo_list() {
    static const std::vector<ZooEntry> catalog = build_catalog();
    return catalog;
}

const ZooEntry* zoo_find(const std::string& name) {
    for (const auto& e : zoo_list())
        if (e.name == name) return &e;
    return nullptr;
}

} // namespace stepanov
