#pragma once

// Discrete Ginzburg-Landau energy on a masked square lattice.
//
//   kinetic = sum over links   |exp(-i a_jk) psi_k - psi_j|^2
//   well    = sum over sites   spacing^2 * 1/2 (1 - |psi_j|^2)^2
//   field   = sum over plaqs   spacing^2 * (B_p - H(center_p))^2,   B_p = circ_p / spacing^2
//
// The kinetic term is the link-variable (Peierls) form of |(grad - iA) psi|^2,
// so a gauge transform psi_j -> e^{i theta_j} psi_j, a_jk -> a_jk + theta_k - theta_j
// leaves every term unchanged exactly.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "glcert/errors.hpp"
#include "glcert/field_model.hpp"
#include "glcert/lattice.hpp"
#include "glcert/numeric.hpp"
#include "glcert/state.hpp"

namespace glcert {

struct EnergyBreakdown {
    double kinetic = 0.0;
    double well = 0.0;
    double field = 0.0;
    double total = 0.0;
};

/// H evaluated at every plaquette center.
inline std::vector<double> sample_field(const Lattice& lat, const FieldSpec& spec) {
    std::vector<double> hp(lat.num_plaquettes());
    for (std::size_t p = 0; p < hp.size(); ++p) hp[p] = eval_H(spec, lat.plaquette_center(p));
    return hp;
}

namespace detail {

inline double circulation(const Plaquette& p, std::span<const double> a) {
    const auto e = p.edges;
    return a[static_cast<std::size_t>(e[0])] + a[static_cast<std::size_t>(e[1])] -
           a[static_cast<std::size_t>(e[2])] - a[static_cast<std::size_t>(e[3])];
}

// One pass over links, sites and plaquettes. When `grad` is non-null it is
// overwritten with the exact gradient in the flat (Re psi, Im psi, a) coordinates,
// stored as complex d/dRe + i d/dIm for psi.
inline EnergyBreakdown evaluate(const Lattice& lat, const State& s, std::span<const double> hp,
                                State* grad) {
    const double dx2 = lat.cell_area();
    const auto& links = lat.links();
    const auto& plaqs = lat.plaquettes();

    if (grad) {
        grad->psi.assign(s.psi.size(), cplx{});
        grad->a.assign(s.a.size(), 0.0);
    }

    EnergyBreakdown e;
    e.kinetic = numeric::pairwise_sum(links.size(), [&](std::size_t l) {
        const auto j = static_cast<std::size_t>(links[l].from);
        const auto k = static_cast<std::size_t>(links[l].to);
        const cplx u = std::polar(1.0, -s.a[l]);
        const cplx d = u * s.psi[k] - s.psi[j];
        if (grad) {
            grad->psi[j] -= 2.0 * d;
            grad->psi[k] += 2.0 * std::conj(u) * d;
            grad->a[l] += -2.0 * (std::conj(s.psi[j]) * d).imag();
        }
        return std::norm(d);
    });

    e.well = numeric::pairwise_sum(s.psi.size(), [&](std::size_t j) {
        const double m = 1.0 - std::norm(s.psi[j]);
        if (grad) grad->psi[j] -= 2.0 * dx2 * m * s.psi[j];
        return 0.5 * dx2 * m * m;
    });

    e.field = numeric::pairwise_sum(plaqs.size(), [&](std::size_t p) {
        const double diff = circulation(plaqs[p], s.a) / dx2 - hp[p];
        if (grad) {
            const auto& ed = plaqs[p].edges;
            const double g = 2.0 * diff;
            grad->a[static_cast<std::size_t>(ed[0])] += g;
            grad->a[static_cast<std::size_t>(ed[1])] += g;
            grad->a[static_cast<std::size_t>(ed[2])] -= g;
            grad->a[static_cast<std::size_t>(ed[3])] -= g;
        }
        return dx2 * diff * diff;
    });

    e.total = e.kinetic + e.well + e.field;
    return e;
}

inline void require_samples(const Lattice& lat, std::span<const double> hp, const char* who) {
    if (hp.size() != lat.num_plaquettes())
        throw ShapeError(std::string(who) + ": field samples do not match plaquette count");
}

}  // namespace detail

/// Energy with pre-sampled field values (see sample_field).
inline EnergyBreakdown energy(const Lattice& lat, const State& s, std::span<const double> hp) {
    s.require_shape(lat, "energy");
    detail::require_samples(lat, hp, "energy");
    return detail::evaluate(lat, s, hp, nullptr);
}

inline EnergyBreakdown energy(const Lattice& lat, const State& s, const FieldSpec& spec) {
    return energy(lat, s, sample_field(lat, spec));
}

/// Energy and its exact gradient in one pass.
inline EnergyBreakdown energy_and_gradient(const Lattice& lat, const State& s,
                                           std::span<const double> hp, State& grad) {
    s.require_shape(lat, "energy_and_gradient");
    detail::require_samples(lat, hp, "energy_and_gradient");
    return detail::evaluate(lat, s, hp, &grad);
}

inline State gradient(const Lattice& lat, const State& s, const FieldSpec& spec) {
    State g;
    energy_and_gradient(lat, s, sample_field(lat, spec), g);
    return g;
}

/// Induced field per plaquette: oriented circulation of a divided by the cell area.
inline std::vector<double> curl_plaquette(const Lattice& lat, const State& s) {
    s.require_shape(lat, "curl_plaquette");
    std::vector<double> b(lat.num_plaquettes());
    const double inv = 1.0 / lat.cell_area();
    for (std::size_t p = 0; p < b.size(); ++p) b[p] = detail::circulation(lat.plaquettes()[p], s.a) * inv;
    return b;
}

/// Infinity norm of the energy gradient; zero exactly at discrete critical points.
inline double el_residual(const Lattice& lat, const State& s, const FieldSpec& spec) {
    return inf_norm(gradient(lat, s, spec));
}

/// Per-link covariant difference |exp(-i a) psi_to - psi_from|^2 (already a
/// kinetic energy contribution: the spacing factors cancel).
inline std::vector<double> link_kinetic(const Lattice& lat, const State& s) {
    s.require_shape(lat, "link_kinetic");
    std::vector<double> out(lat.num_links());
    for (std::size_t l = 0; l < out.size(); ++l) {
        const auto& ln = lat.links()[l];
        out[l] = std::norm(std::polar(1.0, -s.a[l]) * s.psi[static_cast<std::size_t>(ln.to)] -
                           s.psi[static_cast<std::size_t>(ln.from)]);
    }
    return out;
}

/// |psi|^2 at plaquette centers, averaged over the four corners.
inline std::vector<double> plaquette_density(const Lattice& lat, const State& s) {
    s.require_shape(lat, "plaquette_density");
    std::vector<double> out(lat.num_plaquettes());
    for (std::size_t p = 0; p < out.size(); ++p) {
        double acc = 0.0;
        for (int c : lat.plaquettes()[p].corners) acc += std::norm(s.psi[static_cast<std::size_t>(c)]);
        out[p] = 0.25 * acc;
    }
    return out;
}

inline State gauge_transform(const Lattice& lat, const State& s, std::span<const double> theta) {
    s.require_shape(lat, "gauge_transform");
    if (theta.size() != lat.num_sites()) throw ShapeError("gauge_transform: theta must have one entry per site");
    State out = s;
    for (std::size_t j = 0; j < out.psi.size(); ++j) out.psi[j] *= std::polar(1.0, theta[j]);
    for (std::size_t l = 0; l < out.a.size(); ++l) {
        const auto& ln = lat.links()[l];
        out.a[l] += theta[static_cast<std::size_t>(ln.to)] - theta[static_cast<std::size_t>(ln.from)];
    }
    return out;
}

enum class InitKind { Uniform, Random, Normal };

inline const char* to_string(InitKind k) {
    switch (k) {
        case InitKind::Uniform: return "uniform";
        case InitKind::Random: return "random";
        case InitKind::Normal: return "normal";
    }
    return "?";
}

/// Uniform doubles in [0, 1) from the 53 high bits; mt19937_64's sequence is
/// fixed by the standard, so this is reproducible across toolchains.
class UnitRng {
public:
    explicit UnitRng(std::uint64_t seed) : eng_(seed) {}
    double operator()() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

private:
    std::mt19937_64 eng_;
};

/// Uniform: psi = 1, a = 0. Normal: psi = 0, a = 0. Random: psi uniform in the
/// complex unit disk, a uniform in [-0.1, 0.1], determined by `seed`.
inline State initial_state(const Lattice& lat, InitKind kind, std::uint64_t seed = 1) {
    State s(lat);
    switch (kind) {
        case InitKind::Uniform:
            std::fill(s.psi.begin(), s.psi.end(), cplx{1.0, 0.0});
            break;
        case InitKind::Normal:
            break;
        case InitKind::Random: {
            UnitRng rng(seed);
            for (auto& z : s.psi) {
                double x = 0.0, y = 0.0;
                do {
                    x = rng.uniform(-1.0, 1.0);
                    y = rng.uniform(-1.0, 1.0);
                } while (x * x + y * y > 1.0);
                z = {x, y};
            }
            for (auto& v : s.a) v = rng.uniform(-0.1, 0.1);
            break;
        }
    }
    return s;
}

}  // namespace glcert
