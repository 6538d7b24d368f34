#pragma once

// Hand-rolled generators and independent oracles shared by the test suites.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "glcert/energy.hpp"
#include "glcert/lattice.hpp"
#include "glcert/state.hpp"

namespace glcert::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    double normal(double sd = 1.0) { return std::normal_distribution<double>(0.0, sd)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

    State state(const Lattice& lat, double psi_scale = 1.0, double a_scale = 0.3) {
        State s(lat);
        for (auto& z : s.psi) z = {uniform(-psi_scale, psi_scale), uniform(-psi_scale, psi_scale)};
        for (auto& v : s.a) v = uniform(-a_scale, a_scale);
        return s;
    }

    std::vector<double> phases(const Lattice& lat, double amp = 10.0) {
        std::vector<double> t(lat.num_sites());
        for (auto& v : t) v = uniform(-amp, amp);
        return t;
    }

    /// Smooth state: a few random low-frequency modes times a bump that
    /// vanishes at the domain edge, with a smooth vector potential.
    State smooth_state(const Lattice& lat) {
        const double R = lat.R_dom();
        const double kx = uniform(-1.0, 1.0), ky = uniform(-1.0, 1.0), ph = uniform(0.0, 6.0);
        const double amp = uniform(0.3, 1.0);
        const double b = uniform(-0.8, 0.8), c = uniform(-0.3, 0.3);
        State s(lat);
        for (std::size_t k = 0; k < lat.num_sites(); ++k) {
            const Point p = lat.site_center(k);
            const double r = p.norm() / R;
            const double bump = r < 1.0 ? std::pow(std::cos(0.5 * std::numbers::pi * r), 2) : 0.0;
            s.psi[k] = std::polar(amp * bump * (1.0 + 0.3 * std::sin(kx * p.x + ky * p.y)), ph + kx * p.y);
        }
        // A = (-b y / 2 + c y^2 / R, b x / 2); exact line integrals along each link.
        const double d = lat.spacing();
        for (std::size_t l = 0; l < lat.num_links(); ++l) {
            const Point p = lat.site_center(static_cast<std::size_t>(lat.links()[l].from));
            s.a[l] = lat.links()[l].axis == Axis::X ? (-b * p.y / 2.0 + c * p.y * p.y / R) * d : b * p.x / 2.0 * d;
        }
        return s;
    }

private:
    std::mt19937_64 eng_;
};

/// Exact line integral of the symmetric-gauge potential A = (-b y/2, b x/2).
inline std::vector<double> symmetric_gauge_links(const Lattice& lat, double b) {
    std::vector<double> a(lat.num_links());
    const double d = lat.spacing();
    for (std::size_t l = 0; l < lat.num_links(); ++l) {
        const Point p = lat.site_center(static_cast<std::size_t>(lat.links()[l].from));
        a[l] = lat.links()[l].axis == Axis::X ? -b * p.y / 2.0 * d : b * p.x / 2.0 * d;
    }
    return a;
}

/// Central finite difference of the total energy along coordinate `k` of the
/// flat vector (Re psi..., Im psi..., a...).
inline double fd_component(const Lattice& lat, const State& s, std::span<const double> hp, std::size_t k,
                           double rel_step = 1e-6) {
    const std::size_t n = s.psi.size();
    auto coord = [&](State& t) -> double& {
        if (k < n) return reinterpret_cast<double(&)[2]>(t.psi[k])[0];
        if (k < 2 * n) return reinterpret_cast<double(&)[2]>(t.psi[k - n])[1];
        return t.a[k - 2 * n];
    };
    State t = s;
    const double x0 = coord(t);
    const double h = rel_step * std::max(1.0, std::abs(x0));
    coord(t) = x0 + h;
    const double ep = energy(lat, t, hp).total;
    coord(t) = x0 - h;
    const double em = energy(lat, t, hp).total;
    return (ep - em) / (2.0 * h);
}

inline double grad_component(const State& g, std::size_t k) {
    const std::size_t n = g.psi.size();
    if (k < n) return g.psi[k].real();
    if (k < 2 * n) return g.psi[k - n].imag();
    return g.a[k - 2 * n];
}

/// Simple composite-midpoint polar quadrature of f(r) * 2 pi r over (r1, r2).
template <typename F>
double polar_midpoint(F f, double r1, double r2, int n = 200000) {
    const double dr = (r2 - r1) / n;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        const double r = r1 + (k + 0.5) * dr;
        s += f(r) * 2.0 * std::numbers::pi * r;
    }
    return s * dr;
}

}  // namespace glcert::testing
