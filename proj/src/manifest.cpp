#include "stepanov/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stepanov/rng.hpp"

namespace stepanov {

namespace {

using nlohmann::ordered_json;

std::pair<int, int> parse_key(const std::string& key, int dim) {
    auto comma = key.find(',');
    if (comma == std::string::npos) throw ManifestError("component key '" + key + "' is not of the form \"i,j\"");
    int i = 0, j = 0;
    try {
        i = std::stoi(key.substr(0, comma));
        j = std::stoi(key.substr(comma + 1));
    } catch (const std::exception&) {
        throw ManifestError("component key '" + key + "' is not of the form \"i,j\"");
    }
    if (i < 1 || i > dim || j < 1 || j > dim)
        throw ManifestError("component key '" + key + "' out of range for dim " + std::to_string(dim));
    return {i - 1, j - 1};
}

Expression parse_component(const std::string& src, const std::vector<std::string>& coords,
                           const std::string& where) {
    Expression e;
    try {
        e = parse_expression(src);
        e.validate(coords);
    } catch (const ParseError& pe) {
        throw ManifestError(where + ": " + pe.what());
    }
    return e;
}

} // namespace

bool MetricManifest::in_domain(const Eigen::VectorXd& p) const {
    if (p.size() != dim) return false;
    for (int i = 0; i < dim; ++i)
        if (!(p(i) > domain[static_cast<std::size_t>(i)][0] && p(i) < domain[static_cast<std::size_t>(i)][1]))
            return false;
    return true;
}

Eigen::VectorXd MetricManifest::centroid() const {
    Eigen::VectorXd c(dim);
    for (int i = 0; i < dim; ++i)
        c(i) = 0.5 * (domain[static_cast<std::size_t>(i)][0] + domain[static_cast<std::size_t>(i)][1]);
    return c;
}

MetricManifest manifest_from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ManifestError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ManifestError("manifest root must be an object");

    static const std::set<std::string> known = {"name", "dim", "coords", "signature",
                                                "domain", "metric", "potential", "structure"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) throw ManifestError("unknown field '" + key + "'");
    }
    for (const char* req : {"name", "dim", "coords", "signature", "domain"})
        if (!j.contains(req)) throw ManifestError(std::string("missing field '") + req + "'");

    MetricManifest m;
    if (!j["name"].is_string()) throw ManifestError("'name' must be a string");
    m.name = j["name"].get<std::string>();
    if (!j["dim"].is_number_integer()) throw ManifestError("'dim' must be an integer");
    m.dim = j["dim"].get<int>();
    if (m.dim < 1 || m.dim > 8) throw ManifestError("'dim' must be in 1..8");

    if (!j["coords"].is_array() || j["coords"].size() != static_cast<std::size_t>(m.dim))
        throw ManifestError("'coords' must be an array of dim strings");
    for (const auto& c : j["coords"]) {
        if (!c.is_string()) throw ManifestError("'coords' entries must be strings");
        m.coords.push_back(c.get<std::string>());
    }

    if (!j["signature"].is_array() || j["signature"].size() != static_cast<std::size_t>(m.dim))
        throw ManifestError("'signature' must be an array of dim entries, each +1 or -1");
    for (const auto& s : j["signature"]) {
        if (!s.is_number_integer() || (s.get<int>() != 1 && s.get<int>() != -1))
            throw ManifestError("'signature' entries must be +1 or -1");
        m.signature.push_back(s.get<int>());
    }

    if (!j["domain"].is_array() || j["domain"].size() != static_cast<std::size_t>(m.dim))
        throw ManifestError("'domain' must be an array of dim [lo, hi] pairs");
    for (const auto& iv : j["domain"]) {
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
            throw ManifestError("'domain' entries must be [lo, hi] pairs");
        double lo = iv[0].get<double>(), hi = iv[1].get<double>();
        if (!(lo < hi)) throw ManifestError("'domain' interval is empty");
        m.domain.push_back({lo, hi});
    }

    const bool has_metric = j.contains("metric");
    const bool has_potential = j.contains("potential");
    if (has_metric == has_potential)
        throw ManifestError("exactly one of 'metric' or 'potential' is required");

    if (has_metric) {
        m.source = MetricManifest::Source::Expressions;
        if (!j["metric"].is_object()) throw ManifestError("'metric' must be an object");
        for (const auto& [key, value] : j["metric"].items()) {
            auto [a, b] = parse_key(key, m.dim);
            if (a > b) throw ManifestError("metric key '" + key + "': upper triangle only (i <= j)");
            if (!value.is_string()) throw ManifestError("metric components must be expression strings");
            m.metric[{a, b}] = parse_component(value.get<std::string>(), m.coords, "metric[" + key + "]");
        }
        if (m.metric.empty()) throw ManifestError("'metric' must contain at least one component");
    } else {
        m.source = MetricManifest::Source::Potential;
        if (!j["potential"].is_string()) throw ManifestError("'potential' must be an expression string");
        m.potential = parse_component(j["potential"].get<std::string>(), m.coords, "potential");
    }

    if (j.contains("structure")) {
        if (has_potential)
            throw ManifestError("'structure' is implied by 'potential' (canonical block) and may not be given");
        if (!j["structure"].is_object()) throw ManifestError("'structure' must be an object");
        for (const auto& [key, value] : j["structure"].items()) {
            auto [h, i] = parse_key(key, m.dim);
            if (!value.is_string()) throw ManifestError("structure components must be expression strings");
            m.structure[{h, i}] = parse_component(value.get<std::string>(), m.coords, "structure[" + key + "]");
        }
    }

    if (m.has_structure() && m.dim % 2 != 0)
        throw ManifestError("dim must be even when a structure or potential source is present");

    return m;
}

std::string manifest_to_json_text(const MetricManifest& m) {
    if (m.source == MetricManifest::Source::Adapter)
        throw ManifestError("adapter-sourced manifests are in-process only and cannot be serialized");
    ordered_json j;
    j["name"] = m.name;
    j["dim"] = m.dim;
    j["coords"] = m.coords;
    j["signature"] = m.signature;
    ordered_json dom = ordered_json::array();
    for (const auto& iv : m.domain) dom.push_back({iv[0], iv[1]});
    j["domain"] = dom;
    auto key_of = [](const std::pair<int, int>& k) {
        return std::to_string(k.first + 1) + "," + std::to_string(k.second + 1);
    };
    if (m.source == MetricManifest::Source::Expressions) {
        ordered_json met = ordered_json::object();
        for (const auto& [k, e] : m.metric) met[key_of(k)] = e.source();
        j["metric"] = met;
    } else {
        j["potential"] = m.potential.source();
    }
    if (!m.structure.empty()) {
        ordered_json st = ordered_json::object();
        for (const auto& [k, e] : m.structure) st[key_of(k)] = e.source();
        j["structure"] = st;
    }
    return j.dump(2) + "\n";
}

MetricManifest load_manifest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestError("cannot open manifest file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return manifest_from_json_text(ss.str());
}

std::vector<Eigen::VectorXd> sample_points(const MetricManifest& m, int count, std::uint64_t seed) {
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(static_cast<std::size_t>(count));
    if (count < 1) throw Error("point count must be >= 1");
    pts.push_back(m.centroid());
    SplitMix64 rng(seed);
    for (int k = 1; k < count; ++k) {
        Eigen::VectorXd p(m.dim);
        for (int i = 0; i < m.dim; ++i) {
            double lo = m.domain[static_cast<std::size_t>(i)][0];
            double hi = m.domain[static_cast<std::size_t>(i)][1];
            double margin = 0.1 * (hi - lo);
            p(i) = rng.uniform(lo + margin, hi - margin);
        }
        pts.push_back(p);
    }
    return pts;
}

} // namespace stepanov
