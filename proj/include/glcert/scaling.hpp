#pragma once

// Minimal-energy sweeps over the domain radius and the divergence /
// saturation classification of the resulting E(R) curve.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "glcert/certificate.hpp"
#include "glcert/energy.hpp"
#include "glcert/errors.hpp"
#include "glcert/field_model.hpp"
#include "glcert/lattice.hpp"
#include "glcert/minimizer.hpp"

namespace glcert {

/// Lattice spacing as a function of radius: either fixed, or a fixed number
/// of sites per unit length.
struct DeltaPolicy {
    enum class Kind { FixedSpacing, SitesPerUnit } kind = Kind::FixedSpacing;
    double value = 0.25;

    static DeltaPolicy fixed(double spacing) { return {Kind::FixedSpacing, spacing}; }
    static DeltaPolicy per_unit(double sites) { return {Kind::SitesPerUnit, sites}; }

    [[nodiscard]] double spacing_for(double /*R*/) const {
        return kind == Kind::FixedSpacing ? value : 1.0 / value;
    }
};

struct InitChoice {
    InitKind kind = InitKind::Uniform;
    std::uint64_t seed = 1;
};

/// The fixed init set every sweep point is minimized from.
inline std::vector<InitChoice> default_init_set() {
    return {{InitKind::Uniform, 1}, {InitKind::Normal, 1}, {InitKind::Random, 1}, {InitKind::Random, 2}};
}

inline std::string init_label(const InitChoice& c) {
    return c.kind == InitKind::Random ? "random(" + std::to_string(c.seed) + ")" : to_string(c.kind);
}

/// Summary of one init's run, kept for every init (not only the best).
struct InitRun {
    std::string init;
    bool converged = false;
    long iterations = 0;
    double energy = 0.0;
    double max_abs_psi = 0.0;
    double residual = 0.0;
    // Cutoff lemma at R = R_dom; NaN when the disk is under 8 spacings.
    double shop_slack = std::numeric_limits<double>::quiet_NaN();
    double shop_tol = std::numeric_limits<double>::quiet_NaN();
};

struct BestOf {
    MinimizeResult result;
    InitChoice init;
    long total_iterations = 0;
    std::vector<InitRun> runs;
};

/// Minimizes from each init in turn and keeps the lowest-energy result,
/// preferring converged runs over non-converged ones.
inline BestOf minimize_best_of(const Lattice& lat, const FieldSpec& spec, const std::vector<InitChoice>& inits,
                               MinimizeOptions opts) {
    if (inits.empty()) throw ConfigError("init set is empty");
    std::optional<BestOf> best;
    std::vector<InitRun> runs;
    long iters = 0;
    const std::string base_tag = opts.tag;
    for (const auto& ic : inits) {
        opts.tag = base_tag + "\t" + init_label(ic);
        MinimizeResult r = minimize(lat, spec, initial_state(lat, ic.kind, ic.seed), opts);
        iters += r.iterations;
        InitRun run{init_label(ic), r.converged, r.iterations, r.breakdown.total,
                    max_modulus_check(r.state).max_abs_psi, r.residual};
        if (lat.R_dom() >= 8.0 * lat.spacing()) {
            const ShopReport sh = shop_inequality(lat, r.state, lat.R_dom(), Cutoff::cosine());
            run.shop_slack = sh.slack;
            run.shop_tol = sh.tol;
        }
        runs.push_back(run);
        const bool better = !best || (r.converged && !best->result.converged) ||
                            (r.converged == best->result.converged &&
                             r.breakdown.total < best->result.breakdown.total);
        if (better) best = BestOf{std::move(r), ic, 0, {}};
    }
    best->total_iterations = iters;
    best->runs = std::move(runs);
    return std::move(*best);
}

struct SweepEntry {
    double R_dom = 0.0;
    double spacing = 0.0;
    EnergyBreakdown best_energy;
    bool converged = false;
    std::string best_init;
    long iterations = 0;
    CertificateReport certificate;
    std::vector<InitRun> runs;
    double seconds = 0.0;  // wall time for this radius
    State state;
};

struct SweepResult {
    FieldSpec spec;
    std::vector<SweepEntry> entries;
};

struct SweepOptions {
    MinimizeOptions minimize;
    std::vector<InitChoice> inits = default_init_set();
    double R0 = 1.0;
    CertificateTolerances tolerances;
    unsigned jobs = 1;  // worker threads; radii are independent
    bool keep_states = false;
};

/// Runs the best-of-inits minimization at every radius and attaches the
/// certificate chain evaluated at R = R_dom. Non-converged entries are kept
/// and flagged.
inline SweepResult sweep(const FieldSpec& spec, const std::vector<double>& radii, const DeltaPolicy& policy,
                         const SweepOptions& opts) {
    if (radii.empty()) throw ConfigError("sweep: radii list is empty");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw ConfigError("sweep: radii must be strictly increasing");
    spec.validate();
    opts.minimize.validate();

    SweepResult out;
    out.spec = spec;
    out.entries.resize(radii.size());

    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (std::size_t i = next++; i < radii.size(); i = next++) {
            try {
                const auto t0 = std::chrono::steady_clock::now();
                const double R = radii[i];
                const Lattice lat(R, policy.spacing_for(R));
                MinimizeOptions mo = opts.minimize;
                mo.tag = opts.minimize.tag + "\tR=" + std::to_string(R);
                BestOf best = minimize_best_of(lat, spec, opts.inits, mo);
                SweepEntry& e = out.entries[i];
                e.R_dom = R;
                e.spacing = lat.spacing();
                e.best_energy = best.result.breakdown;
                e.converged = best.result.converged;
                e.best_init = init_label(best.init);
                e.iterations = best.total_iterations;
                e.runs = best.runs;
                e.certificate = certificate_chain(lat, best.result.state, spec, R, opts.R0, Cutoff::cosine(),
                                                  opts.tolerances);
                if (opts.keep_states) e.state = std::move(best.result.state);
                e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(radii.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

// ---- power-law fit ----------------------------------------------------------

struct PowerFit {
    double c = 0.0;
    double beta = 0.0;
    double r_squared = 0.0;
};

/// Least squares of log E = log c + beta log R.
inline PowerFit fit_power_law(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) throw DomainError("fit_power_law needs at least 3 points");
    const auto n = static_cast<double>(pairs.size());
    double sx = 0, sy = 0;
    for (const auto& [R, E] : pairs) {
        if (!(R > 0.0)) throw DomainError("fit_power_law: radii must be positive");
        if (!(E > 0.0)) throw DomainError("fit_power_law: energies must be positive");
        sx += std::log(R);
        sy += std::log(E);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [R, E] : pairs) {
        const double dx = std::log(R) - mx, dy = std::log(E) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw DomainError("fit_power_law: radii must be distinct");
    PowerFit f;
    f.beta = sxy / sxx;
    f.c = std::exp(my - f.beta * mx);
    double ss_res = 0;
    for (const auto& [R, E] : pairs) {
        const double r = std::log(E) - (std::log(f.c) + f.beta * std::log(R));
        ss_res += r * r;
    }
    f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return f;
}

// ---- verdict ----------------------------------------------------------------

enum class Verdict { Diverging, Saturating, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Diverging: return "diverging";
        case Verdict::Saturating: return "saturating";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct VerdictOptions {
    double beta_factor = 0.5;       // diverging needs beta >= beta_factor * (2 - alpha)
    double increment_ratio = 0.1;   // last increment relative to the previous energy
    double saturating_beta = 0.5;   // saturating needs beta <= this
};

struct VerdictReport {
    Verdict verdict = Verdict::Inconclusive;
    double beta = std::numeric_limits<double>::quiet_NaN();
    double c = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();
    double alpha = 0.0;
    double last_increment_ratio = std::numeric_limits<double>::quiet_NaN();
    std::size_t converged_entries = 0;
    std::string details;
};

/// Decay exponent used by the verdict: alpha for power laws, 0 otherwise.
inline double verdict_alpha(const FieldSpec& spec) {
    return spec.kind == FieldKind::PowerLaw ? spec.alpha : 0.0;
}

/// Classifies an (R, E) series given the field decay exponent.
inline VerdictReport divergence_verdict(const std::vector<std::pair<double, double>>& series, double alpha,
                                        const VerdictOptions& vo = {}) {
    VerdictReport v;
    v.alpha = alpha;
    v.converged_entries = series.size();
    if (series.size() < 3) {
        v.details = "need at least 3 converged entries, have " + std::to_string(series.size());
        return v;
    }
    const double e_prev = series[series.size() - 2].second;
    const double e_last = series.back().second;
    const double inc = e_last - e_prev;
    const bool small_increment = inc <= vo.increment_ratio * e_prev;
    const bool large_increment = inc >= vo.increment_ratio * e_prev;
    v.last_increment_ratio = e_prev != 0.0 ? inc / e_prev : (inc == 0.0 ? 0.0 : std::copysign(INFINITY, inc));

    const bool positive = std::all_of(series.begin(), series.end(), [](const auto& p) { return p.second > 0.0; });
    if (!positive) {
        // No log-log fit possible; only the increment test applies.
        v.verdict = small_increment ? Verdict::Saturating : Verdict::Inconclusive;
        v.details = "non-positive energies: power-law fit skipped, increment test only";
        return v;
    }
    const PowerFit f = fit_power_law(series);
    v.beta = f.beta;
    v.c = f.c;
    v.r_squared = f.r_squared;
    const double threshold = vo.beta_factor * (2.0 - alpha);
    if (f.beta >= threshold && large_increment) {
        v.verdict = Verdict::Diverging;
        v.details = "beta >= " + std::to_string(threshold) + " and last increment >= " +
                    std::to_string(vo.increment_ratio) + " of previous energy";
    } else if (small_increment && f.beta <= vo.saturating_beta) {
        v.verdict = Verdict::Saturating;
        v.details = "last increment <= " + std::to_string(vo.increment_ratio) + " of previous energy and beta <= " +
                    std::to_string(vo.saturating_beta);
    } else {
        v.details = "neither divergence nor saturation criteria met";
    }
    return v;
}

inline VerdictReport divergence_verdict(const SweepResult& result, const VerdictOptions& vo = {}) {
    std::vector<std::pair<double, double>> series;
    for (const auto& e : result.entries)
        if (e.converged) series.emplace_back(e.R_dom, e.best_energy.total);
    return divergence_verdict(series, verdict_alpha(result.spec), vo);
}

// ---- output -----------------------------------------------------------------

inline constexpr const char* kSweepCsvHeader =
    "R,delta,energy_total,energy_kinetic,energy_well,energy_field,converged,eq7_rhs";

/// One row per entry; eq7_rhs is empty when the final bound does not apply (alpha >= 1).
inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
    os << kSweepCsvHeader << '\n';
    char buf[512];
    for (const auto& e : r.entries) {
        char eq7[64] = "";
        if (e.certificate.eq7_applicable) std::snprintf(eq7, sizeof eq7, "%.17g", e.certificate.eq7_rhs);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%s\n", e.R_dom, e.spacing,
                      e.best_energy.total, e.best_energy.kinetic, e.best_energy.well, e.best_energy.field,
                      e.converged ? 1 : 0, eq7);
        os << buf;
    }
}

inline nlohmann::json to_json(const InitRun& r) {
    return {{"init", r.init},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"energy", r.energy},
            {"max_abs_psi", r.max_abs_psi},
            {"residual", r.residual},
            {"shop_slack", std::isfinite(r.shop_slack) ? nlohmann::json(r.shop_slack) : nlohmann::json(nullptr)},
            {"shop_tol", std::isfinite(r.shop_tol) ? nlohmann::json(r.shop_tol) : nlohmann::json(nullptr)}};
}

inline nlohmann::json to_json(const VerdictReport& v) {
    using nlohmann::json;
    auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    return {{"verdict", to_string(v.verdict)},
            {"beta", num(v.beta)},
            {"c", num(v.c)},
            {"r_squared", num(v.r_squared)},
            {"alpha", v.alpha},
            {"last_increment_ratio", num(v.last_increment_ratio)},
            {"converged_entries", v.converged_entries},
            {"details", v.details},
            {"interpretation",
             "finite-domain scaling trend of minimal energy; an artifact-level reading, not a proof about "
             "solutions on the whole plane"}};
}

}  // namespace glcert
