#pragma once

// Nonlinear conjugate gradient (Polak-Ribiere+, periodic restarts) with
// Armijo backtracking, specialised to the lattice energy but written against
// a generic objective so the iteration itself can be tested in isolation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "glcert/energy.hpp"
#include "glcert/errors.hpp"
#include "glcert/state.hpp"

namespace glcert {

struct MinimizeOptions {
    double grad_tol = 1e-6;      // stop when the gradient infinity norm is <= this
    long max_iters = 200000;
    double ls_shrink = 0.5;      // backtracking factor (upper bound on each reduction)
    double ls_slope = 1e-4;      // Armijo sufficient-decrease constant
    long restart_period = 0;     // 0 means "number of unknowns"
    // After an Armijo point is found, secant steps on the directional
    // derivative until |g.d| <= ls_curvature * |g0.d| (at most ls_refine_max
    // extra evaluations). CG direction quality depends on this.
    double ls_curvature = 0.01;
    int ls_refine_max = 10;
    long progress_every = 0;     // 0 disables progress lines
    std::ostream* progress = nullptr;
    std::string tag = "minimize";

    void validate() const {
        if (!(grad_tol > 0.0)) throw ConfigError("minimize.grad_tol must be > 0");
        if (max_iters < 0) throw ConfigError("minimize.max_iters must be >= 0");
        if (!(ls_shrink > 0.0 && ls_shrink < 1.0)) throw ConfigError("minimize.ls_shrink must be in (0, 1)");
        if (!(ls_slope > 0.0 && ls_slope < 0.5)) throw ConfigError("minimize.ls_slope must be in (0, 0.5)");
        if (restart_period < 0) throw ConfigError("minimize.restart_period must be >= 1 (or 0 for default)");
        if (!(ls_curvature > 0.0 && ls_curvature < 1.0)) throw ConfigError("minimize.ls_curvature must be in (0, 1)");
        if (ls_refine_max < 0) throw ConfigError("minimize.ls_refine_max must be >= 0");
    }
};

struct MinimizeResult {
    State state;
    EnergyBreakdown breakdown;
    long iterations = 0;
    bool converged = false;
    double residual = 0.0;  // gradient infinity norm at `state`
    long evaluations = 0;
};

/// Objective interface: `EnergyBreakdown operator()(const State& x, State& grad)`
/// returning the value (in `.total`) and writing the gradient.
template <typename Objective>
MinimizeResult minimize_cg(const Objective& objective, State x, const MinimizeOptions& opts) {
    opts.validate();
    MinimizeResult out;
    State g, g_trial;
    EnergyBreakdown e = objective(x, g);
    ++out.evaluations;
    if (!std::isfinite(e.total) || !g.all_finite())
        throw NumericalFailure("minimize: non-finite energy or gradient at the initial state");

    const long restart = opts.restart_period > 0 ? opts.restart_period
                                                 : static_cast<long>(x.num_unknowns());
    double res = inf_norm(g);
    auto report = [&](long it) {
        if (opts.progress && opts.progress_every > 0 && it % opts.progress_every == 0) {
            // One formatted write per line so concurrent runs do not interleave mid-line.
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s\t%ld\t%.17g\t%.6e\n", opts.tag.c_str(), it, e.total, res);
            *opts.progress << buf << std::flush;
        }
    };
    report(0);

    State d = g;
    scale(-1.0, d);
    double gg = dot(g, g);
    double prev_step = 0.0;
    double prev_gd = 0.0;
    long since_restart = 0;
    long it = 0;

    while (res > opts.grad_tol && it < opts.max_iters) {
        double gd = dot(g, d);
        if (!(gd < 0.0)) {
            d = g;
            scale(-1.0, d);
            gd = -gg;
            since_restart = 0;
        }

        // Initial trial: keep the first-order change of the previous step.
        double step = prev_step > 0.0 ? prev_step * prev_gd / gd : 1.0 / std::max(1.0, inf_norm(d));
        if (!std::isfinite(step) || step <= 0.0) step = 1.0 / std::max(1.0, inf_norm(d));

        State trial;
        EnergyBreakdown et;
        bool accepted = false;
        for (int bt = 0; bt < 80; ++bt) {
            trial = x;
            axpy(step, d, trial);
            et = objective(trial, g_trial);
            ++out.evaluations;
            if (std::isfinite(et.total) && et.total <= e.total + opts.ls_slope * step * gd &&
                et.total < e.total) {
                accepted = true;
                break;
            }
            // Safeguarded quadratic interpolation, never less than a 10x cut
            // and never more than ls_shrink of the current step.
            double next = opts.ls_shrink * step;
            if (std::isfinite(et.total)) {
                const double curv = et.total - e.total - gd * step;
                if (curv > 0.0) next = std::clamp(-gd * step * step / (2.0 * curv), 0.1 * step, next);
            }
            step = next;
        }

        if (accepted) {
            // Secant refinement. Every replacement point satisfies Armijo and
            // lowers the energy further, so monotonicity is preserved.
            double s0 = 0.0, slope0 = gd;
            double s1 = step, slope1 = dot(g_trial, d);
            State t2, g2;
            for (int r = 0; r < opts.ls_refine_max && std::abs(slope1) > opts.ls_curvature * std::abs(gd); ++r) {
                double sn = 10.0 * s1;  // still descending with no positive curvature: expand
                if (!(slope1 < 0.0 && slope1 <= slope0)) {
                    if (slope1 == slope0) break;
                    sn = s1 - slope1 * (s1 - s0) / (slope1 - slope0);
                    if (!std::isfinite(sn) || sn <= 0.0) break;
                }
                sn = std::clamp(sn, 0.1 * s1, 10.0 * s1);
                t2 = x;
                axpy(sn, d, t2);
                const EnergyBreakdown e2 = objective(t2, g2);
                ++out.evaluations;
                if (!std::isfinite(e2.total) || e2.total > e.total + opts.ls_slope * sn * gd) break;
                const double slope2 = dot(g2, d);
                if (e2.total > et.total && std::abs(slope2) >= std::abs(slope1)) break;
                s0 = s1;
                slope0 = slope1;
                s1 = sn;
                slope1 = slope2;
                if (e2.total <= et.total) {
                    std::swap(trial, t2);
                    std::swap(g_trial, g2);
                    et = e2;
                    step = sn;
                }
            }
        }

        if (!accepted) {
            if (since_restart == 0) break;  // steepest descent also failed: stagnated at rounding level
            d = g;
            scale(-1.0, d);
            since_restart = 0;
            prev_step = 0.0;
            continue;
        }
        if (!g_trial.all_finite()) throw NumericalFailure("minimize: non-finite gradient");

        ++it;
        ++since_restart;
        x = std::move(trial);
        e = et;
        prev_step = step;
        prev_gd = gd;

        // Polak-Ribiere+: beta = max(0, g_new . (g_new - g_old) / |g_old|^2)
        const double g_new_sq = dot(g_trial, g_trial);
        const double cross = dot(g_trial, g);
        std::swap(g, g_trial);
        res = inf_norm(g);
        double beta = gg > 0.0 ? std::max(0.0, (g_new_sq - cross) / gg) : 0.0;
        gg = g_new_sq;
        if (since_restart >= restart) {
            beta = 0.0;
            since_restart = 0;
        }
        scale(beta, d);
        axpy(-1.0, g, d);
        report(it);
    }

    out.state = std::move(x);
    out.breakdown = e;
    out.iterations = it;
    out.residual = res;
    out.converged = res <= opts.grad_tol;
    return out;
}

/// Minimizes the lattice energy for `spec` starting from `init`.
inline MinimizeResult minimize(const Lattice& lat, const FieldSpec& spec, State init,
                               const MinimizeOptions& opts) {
    init.require_shape(lat, "minimize");
    const std::vector<double> hp = sample_field(lat, spec);
    auto objective = [&](const State& x, State& g) { return energy_and_gradient(lat, x, hp, g); };
    MinimizeResult r = minimize_cg(objective, std::move(init), opts);
    r.breakdown = energy(lat, r.state, hp);
    return r;
}

}  // namespace glcert
