#pragma once

// Batch front end: JSON run configuration and the solve / sweep / certify /
// field-check commands. Each command returns the process exit code:
//   0 success, 1 error (bad config, I/O, shape mismatch),
//   2 minimizer did not converge (solve), 3 certificate step failed (certify).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "glcert/certificate.hpp"
#include "glcert/energy.hpp"
#include "glcert/errors.hpp"
#include "glcert/field_model.hpp"
#include "glcert/lattice.hpp"
#include "glcert/minimizer.hpp"
#include "glcert/scaling.hpp"
#include "glcert/snapshot.hpp"
#include "glcert/version.hpp"

namespace glcert::cli {

using nlohmann::json;

struct RunConfig {
    json raw;
    FieldSpec field;
    std::optional<double> R_dom;
    std::vector<double> radii;
    DeltaPolicy delta = DeltaPolicy::fixed(0.25);
    MinimizeOptions minimize;
    std::string init = "uniform";  // uniform | normal | random | best
    std::uint64_t seed = 1;
    std::optional<double> cert_R;
    double R0 = 1.0;
    CertificateTolerances tolerances;
    VerdictOptions verdict;
    std::vector<double> check_radii;
    std::string csv_path, json_path, state_path, certificate_path;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
};

namespace detail {

inline double get_number(const json& obj, const char* block, const char* key, double fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    if (!obj.at(key).is_number())
        throw ConfigError(std::string(block) + "." + key + ": expected a number");
    return obj.at(key).get<double>();
}

inline std::string get_string(const json& obj, const char* block, const char* key, std::string fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    if (!obj.at(key).is_string()) throw ConfigError(std::string(block) + "." + key + ": expected a string");
    return obj.at(key).get<std::string>();
}

inline std::vector<double> get_numbers(const json& obj, const char* block, const char* key) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    if (!obj.at(key).is_array()) throw ConfigError(std::string(block) + "." + key + ": expected an array");
    for (const auto& v : obj.at(key)) {
        if (!v.is_number()) throw ConfigError(std::string(block) + "." + key + ": entries must be numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline const json& block(const json& root, const char* name) {
    static const json empty = json::object();
    if (!root.contains(name)) return empty;
    if (!root.at(name).is_object()) throw ConfigError(std::string(name) + ": expected an object");
    return root.at(name);
}

}  // namespace detail

inline RunConfig parse_config(const json& root) {
    using namespace detail;
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    RunConfig c;
    c.raw = root;

    const json& lat = block(root, "lattice");
    if (lat.contains("sites_per_unit"))
        c.delta = DeltaPolicy::per_unit(get_number(lat, "lattice", "sites_per_unit", 4.0));
    else
        c.delta = DeltaPolicy::fixed(get_number(lat, "lattice", "delta", 0.25));
    if (!(c.delta.value > 0.0)) throw ConfigError("lattice.delta / sites_per_unit must be > 0");
    if (lat.contains("R_dom")) c.R_dom = get_number(lat, "lattice", "R_dom", 0.0);
    c.radii = get_numbers(lat, "lattice", "radii");

    if (!root.contains("field")) throw ConfigError("field: missing");
    const double spacing = c.delta.spacing_for(c.R_dom.value_or(1.0));
    c.field = field_from_json(root.at("field"), 0.5 * spacing);

    const json& mn = block(root, "minimize");
    c.minimize.grad_tol = get_number(mn, "minimize", "grad_tol", c.minimize.grad_tol);
    c.minimize.max_iters = static_cast<long>(get_number(mn, "minimize", "max_iters", static_cast<double>(c.minimize.max_iters)));
    c.minimize.ls_shrink = get_number(mn, "minimize", "ls_shrink", c.minimize.ls_shrink);
    c.minimize.ls_slope = get_number(mn, "minimize", "ls_slope", c.minimize.ls_slope);
    c.minimize.restart_period = static_cast<long>(get_number(mn, "minimize", "restart_period", 0.0));
    c.minimize.ls_curvature = get_number(mn, "minimize", "ls_curvature", c.minimize.ls_curvature);
    c.minimize.ls_refine_max = static_cast<int>(get_number(mn, "minimize", "ls_refine_max", c.minimize.ls_refine_max));
    c.minimize.progress_every = static_cast<long>(get_number(mn, "minimize", "progress_every", 1000.0));
    c.minimize.validate();

    c.init = get_string(root, "config", "init", c.init);
    if (c.init != "uniform" && c.init != "normal" && c.init != "random" && c.init != "best")
        throw ConfigError("init: expected uniform | normal | random | best");
    c.seed = static_cast<std::uint64_t>(get_number(root, "config", "seed", 1.0));
    const double jobs = get_number(root, "config", "jobs", static_cast<double>(c.jobs));
    if (!(jobs >= 1.0)) throw ConfigError("jobs: must be >= 1");
    c.jobs = static_cast<unsigned>(jobs);

    const json& cert = block(root, "certificate");
    if (cert.contains("R")) c.cert_R = get_number(cert, "certificate", "R", 0.0);
    c.R0 = get_number(cert, "certificate", "R0", c.R0);
    c.tolerances.disc = get_number(cert, "certificate", "tol_disc", c.tolerances.disc);
    c.tolerances.max_modulus = get_number(cert, "certificate", "tol_mm", c.tolerances.max_modulus);

    const json& vd = block(root, "verdict");
    c.verdict.beta_factor = get_number(vd, "verdict", "beta_factor", c.verdict.beta_factor);
    c.verdict.increment_ratio = get_number(vd, "verdict", "increment_ratio", c.verdict.increment_ratio);
    c.verdict.saturating_beta = get_number(vd, "verdict", "saturating_beta", c.verdict.saturating_beta);

    c.check_radii = get_numbers(block(root, "field_check"), "field_check", "radii");

    const json& out = block(root, "output");
    c.csv_path = get_string(out, "output", "csv_path", "");
    c.json_path = get_string(out, "output", "json_path", "");
    c.state_path = get_string(out, "output", "state_path", "");
    c.certificate_path = get_string(out, "output", "certificate_path", "");
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config " + path);
    json root;
    try {
        root = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return parse_config(root);
}

/// FNV-1a of the canonical (key-sorted) config dump.
inline std::string config_hash(const json& raw) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : raw.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline json reproducibility(const RunConfig& c) {
    return {{"config_hash", config_hash(c.raw)}, {"seed", c.seed}, {"version", kVersion}};
}

namespace detail {

inline void write_json(const std::string& path, const json& j, std::ostream& out) {
    if (path.empty()) {
        out << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open " + path + " for writing");
    f << j.dump(2) << '\n';
}

inline double single_radius(const RunConfig& c) {
    if (c.R_dom) return *c.R_dom;
    if (c.radii.size() == 1) return c.radii.front();
    throw ConfigError("lattice.R_dom: missing (a single domain radius is required)");
}

inline std::vector<InitChoice> init_set(const RunConfig& c) {
    if (c.init == "best") return default_init_set();
    if (c.init == "normal") return {{InitKind::Normal, c.seed}};
    if (c.init == "random") return {{InitKind::Random, c.seed}};
    return {{InitKind::Uniform, c.seed}};
}

}  // namespace detail

inline int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const double R = detail::single_radius(c);
    const Lattice lat(R, c.delta.spacing_for(R));
    MinimizeOptions mo = c.minimize;
    mo.progress = &err;
    mo.tag = "solve";
    const BestOf best = minimize_best_of(lat, c.field, detail::init_set(c), mo);
    const auto& r = best.result;
    const auto mm = max_modulus_check(r.state);

    if (!c.state_path.empty())
        save_snapshot(c.state_path, lat, r.state, {{"reproducibility", reproducibility(c)}});
    json j = {{"energy", to_json(r.breakdown)},
              {"converged", r.converged},
              {"iterations", r.iterations},
              {"residual", r.residual},
              {"max_abs_psi", mm.max_abs_psi},
              {"init", init_label(best.init)},
              {"lattice", {{"R_dom", lat.R_dom()}, {"delta", lat.spacing()}, {"num_sites", lat.num_sites()}}},
              {"field", field_to_json(c.field)},
              {"reproducibility", reproducibility(c)}};
    if (c.json_path.empty()) out << j.dump(2) << '\n';
    else detail::write_json(c.json_path, j, out);
    char line[256];
    std::snprintf(line, sizeof line, "solve: R_dom=%g delta=%g energy=%.12g converged=%s iterations=%ld\n",
                  lat.R_dom(), lat.spacing(), r.breakdown.total, r.converged ? "yes" : "no", r.iterations);
    err << line;
    return r.converged ? 0 : 2;
}

/// Sweep options exactly as the sweep command uses them.
inline SweepOptions sweep_options(const RunConfig& c, std::ostream* progress) {
    SweepOptions so;
    so.minimize = c.minimize;
    so.minimize.progress = progress;
    so.minimize.tag = "sweep";
    so.R0 = c.R0;
    so.tolerances = c.tolerances;
    so.jobs = c.jobs;
    return so;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.radii.empty()) throw ConfigError("lattice.radii: missing or empty");
    const SweepOptions so = sweep_options(c, &err);
    const SweepResult res = sweep(c.field, c.radii, c.delta, so);
    const VerdictReport v = divergence_verdict(res, c.verdict);

    if (c.csv_path.empty()) {
        write_sweep_csv(out, res);
    } else {
        std::ofstream f(c.csv_path);
        if (!f) throw ConfigError("cannot open " + c.csv_path + " for writing");
        write_sweep_csv(f, res);
    }
    json entries = json::array();
    for (const auto& e : res.entries) {
        json runs = json::array();
        for (const auto& r : e.runs) runs.push_back(to_json(r));
        entries.push_back({{"R", e.R_dom},
                           {"delta", e.spacing},
                           {"energy", to_json(e.best_energy)},
                           {"converged", e.converged},
                           {"best_init", e.best_init},
                           {"iterations", e.iterations},
                           {"runs", runs},
                           {"certificate", to_json(e.certificate)}});
    }
    json j = to_json(v);
    j["field"] = field_to_json(c.field);
    j["entries"] = entries;
    j["reproducibility"] = reproducibility(c);
    if (!c.json_path.empty()) detail::write_json(c.json_path, j, out);
    err << "sweep: verdict=" << to_string(v.verdict) << '\n';
    return 0;
}

inline int cmd_certify(const RunConfig& c, const std::string& state_path, std::ostream& out, std::ostream& err) {
    const std::string path = state_path.empty() ? c.state_path : state_path;
    if (path.empty()) throw ConfigError("certify: no snapshot path (use --state or output.state_path)");
    const double R_dom = detail::single_radius(c);
    const Lattice lat(R_dom, c.delta.spacing_for(R_dom));
    const Snapshot snap = load_snapshot(path);
    require_snapshot_matches(snap, lat);
    const double R = c.cert_R.value_or(R_dom);
    const CertificateReport rep = certificate_chain(lat, snap.state, c.field, R, c.R0, Cutoff::cosine(), c.tolerances);
    json j = to_json(rep);
    j["reproducibility"] = reproducibility(c);
    detail::write_json(c.certificate_path, j, out);
    for (const auto& s : rep.steps)
        if (!s.pass) err << "certify: step " << s.name << " failed (slack " << s.slack() << ", tol " << s.tol << ")\n";
    return rep.all_pass() ? 0 : 3;
}

inline int cmd_field_check(const RunConfig& c, std::ostream& out, std::ostream& /*err*/) {
    const L2Class cls = classify_L2_plane(c.field);
    std::vector<double> radii = c.check_radii;
    if (radii.empty()) radii = c.radii;
    if (radii.empty() && c.R_dom) radii.push_back(*c.R_dom);
    if (radii.empty()) throw ConfigError("field_check.radii: no radii to sample");

    json checks = json::array();
    out << "classification\t" << to_string(cls) << '\n';
    for (double R : radii) {
        const auto rh = reverse_holder_check(c.field, R);
        checks.push_back({{"R", R}, {"lhs", rh.lhs}, {"rhs", rh.rhs}, {"ratio", rh.lhs / rh.rhs}, {"holds", rh.holds}});
        char line[256];
        std::snprintf(line, sizeof line, "reverse_holder\tR=%g\tlhs=%.12g\trhs=%.12g\tratio=%.9f\t%s\n", R, rh.lhs,
                      rh.rhs, rh.lhs / rh.rhs, rh.holds ? "holds" : "fails");
        out << line;
    }
    const double alpha = verdict_alpha(c.field);
    const bool theorem_regime = c.field.h > 0.0 && alpha < 1.0;
    out << "tail\th=" << c.field.h << "\talpha=" << alpha << "\tr_cut=" << c.field.r_cut
        << "\tnonexistence_regime=" << (theorem_regime ? "yes" : "no") << '\n';
    json j = {{"classification", to_string(cls)},
              {"reverse_holder", checks},
              {"tail", {{"h", c.field.h}, {"alpha", alpha}, {"r_cut", c.field.r_cut}, {"nonexistence_regime", theorem_regime}}},
              {"field", field_to_json(c.field)},
              {"reproducibility", reproducibility(c)}};
    if (!c.json_path.empty()) detail::write_json(c.json_path, j, out);
    return 0;
}

/// Loads the config and dispatches; every library error becomes exit code 1.
inline int run(const std::string& command, const std::string& config_path, const std::string& state_path,
               std::ostream& out, std::ostream& err) {
    try {
        const RunConfig c = load_config(config_path);
        if (command == "solve") return cmd_solve(c, out, err);
        if (command == "sweep") return cmd_sweep(c, out, err);
        if (command == "certify") return cmd_certify(c, state_path, out, err);
        if (command == "field-check") return cmd_field_check(c, out, err);
        err << "error: unknown command '" << command << "'\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace glcert::cli
