#pragma once

// State snapshot files.
//
//   {
//     "format": "glcert-state/1",
//     "lattice": {"R_dom": 8.0, "delta": 0.25, "num_sites": N, "num_links": L},
//     "psi_re": [N numbers], "psi_im": [N numbers], "a": [L numbers],
//     "reproducibility": {...}            // optional, ignored on load
//   }
//
// Numbers are written with round-trip precision, so load(save(s)) == s bit for bit.

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "glcert/errors.hpp"
#include "glcert/lattice.hpp"
#include "glcert/state.hpp"

namespace glcert {

inline constexpr const char* kSnapshotFormat = "glcert-state/1";

struct Snapshot {
    double R_dom = 0.0;
    double delta = 0.0;
    State state;
};

inline nlohmann::json snapshot_to_json(const Lattice& lat, const State& s) {
    s.require_shape(lat, "snapshot");
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array(), a = nlohmann::json::array();
    for (const auto& z : s.psi) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    for (double v : s.a) a.push_back(v);
    return {{"format", kSnapshotFormat},
            {"lattice",
             {{"R_dom", lat.R_dom()}, {"delta", lat.spacing()}, {"num_sites", lat.num_sites()},
              {"num_links", lat.num_links()}}},
            {"psi_re", re},
            {"psi_im", im},
            {"a", a}};
}

inline Snapshot snapshot_from_json(const nlohmann::json& j) {
    auto fail = [](const std::string& what) { throw ConfigError("snapshot: " + what); };
    if (!j.is_object()) fail("expected an object");
    if (j.value("format", std::string{}) != kSnapshotFormat) fail(std::string("format must be ") + kSnapshotFormat);
    if (!j.contains("lattice") || !j.at("lattice").is_object()) fail("missing lattice block");
    const auto& lj = j.at("lattice");
    for (const char* k : {"R_dom", "delta", "num_sites", "num_links"})
        if (!lj.contains(k) || !lj.at(k).is_number()) fail(std::string("lattice.") + k + " missing or not a number");

    Snapshot snap;
    snap.R_dom = lj.at("R_dom").get<double>();
    snap.delta = lj.at("delta").get<double>();
    const auto ns = lj.at("num_sites").get<std::size_t>();
    const auto nl = lj.at("num_links").get<std::size_t>();

    auto read = [&](const char* key, std::size_t n) {
        if (!j.contains(key) || !j.at(key).is_array()) fail(std::string(key) + " missing");
        const auto& arr = j.at(key);
        if (arr.size() != n)
            fail(std::string(key) + " has " + std::to_string(arr.size()) + " entries, expected " + std::to_string(n));
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k) {
            if (!arr[k].is_number()) fail(std::string(key) + "[" + std::to_string(k) + "] is not a number");
            out[k] = arr[k].get<double>();
            if (!std::isfinite(out[k])) fail(std::string(key) + "[" + std::to_string(k) + "] is not finite");
        }
        return out;
    };
    const auto re = read("psi_re", ns);
    const auto im = read("psi_im", ns);
    snap.state = State(ns, nl);
    for (std::size_t k = 0; k < ns; ++k) snap.state.psi[k] = {re[k], im[k]};
    snap.state.a = read("a", nl);
    return snap;
}

inline void save_snapshot(const std::string& path, const Lattice& lat, const State& s,
                          const nlohmann::json& extra = nlohmann::json::object()) {
    nlohmann::json j = snapshot_to_json(lat, s);
    for (const auto& [k, v] : extra.items()) j[k] = v;
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open " + path + " for writing");
    f << j.dump() << '\n';
    if (!f) throw ConfigError("failed writing " + path);
}

inline Snapshot load_snapshot(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open snapshot " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("snapshot " + path + ": " + e.what());
    }
    return snapshot_from_json(j);
}

/// Throws ShapeError unless the snapshot was taken on `lat`.
inline void require_snapshot_matches(const Snapshot& snap, const Lattice& lat) {
    if (snap.R_dom != lat.R_dom() || snap.delta != lat.spacing() || !snap.state.matches(lat))
        throw ShapeError("snapshot lattice (R_dom=" + std::to_string(snap.R_dom) + ", delta=" +
                         std::to_string(snap.delta) + ") does not match the configured lattice (R_dom=" +
                         std::to_string(lat.R_dom()) + ", delta=" + std::to_string(lat.spacing()) + ")");
}

}  // namespace glcert
