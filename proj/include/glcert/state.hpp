#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "glcert/errors.hpp"
#include "glcert/lattice.hpp"
#include "glcert/numeric.hpp"

namespace glcert {

using cplx = std::complex<double>;

/// Order parameter per site and line-integrated vector potential per link.
///
/// `a[l]` is the integral of A along link l from its `from` site to its `to`
/// site, i.e. spacing * A_tangential at the link midpoint to second order.
/// The same shape doubles as a tangent / cotangent vector; the real inner
/// product treats (Re psi, Im psi, a) as one flat vector.
struct State {
    std::vector<cplx> psi;
    std::vector<double> a;

    State() = default;
    State(std::size_t sites, std::size_t links) : psi(sites), a(links) {}
    explicit State(const Lattice& lat) : State(lat.num_sites(), lat.num_links()) {}

    [[nodiscard]] std::size_t num_unknowns() const { return 2 * psi.size() + a.size(); }

    [[nodiscard]] bool matches(const Lattice& lat) const {
        return psi.size() == lat.num_sites() && a.size() == lat.num_links();
    }

    void require_shape(const Lattice& lat, const char* who) const {
        if (!matches(lat))
            throw ShapeError(std::string(who) + ": state has " + std::to_string(psi.size()) +
                             " sites / " + std::to_string(a.size()) + " links, lattice has " +
                             std::to_string(lat.num_sites()) + " / " + std::to_string(lat.num_links()));
    }

    [[nodiscard]] bool all_finite() const {
        return std::all_of(psi.begin(), psi.end(),
                           [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }) &&
               std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
    }

    friend bool operator==(const State&, const State&) = default;
};

/// Real inner product of two same-shaped states.
inline double dot(const State& u, const State& v) {
    const double sp = numeric::pairwise_sum(u.psi.size(), [&](std::size_t k) {
        return u.psi[k].real() * v.psi[k].real() + u.psi[k].imag() * v.psi[k].imag();
    });
    const double sa = numeric::pairwise_sum(u.a.size(), [&](std::size_t k) { return u.a[k] * v.a[k]; });
    return sp + sa;
}

/// y += s * x
inline void axpy(double s, const State& x, State& y) {
    for (std::size_t k = 0; k < y.psi.size(); ++k) y.psi[k] += s * x.psi[k];
    for (std::size_t k = 0; k < y.a.size(); ++k) y.a[k] += s * x.a[k];
}

/// y = x + s * y
inline void xpay(const State& x, double s, State& y) {
    for (std::size_t k = 0; k < y.psi.size(); ++k) y.psi[k] = x.psi[k] + s * y.psi[k];
    for (std::size_t k = 0; k < y.a.size(); ++k) y.a[k] = x.a[k] + s * y.a[k];
}

inline void scale(double s, State& y) {
    for (auto& z : y.psi) z *= s;
    for (auto& v : y.a) v *= s;
}

/// Largest absolute flat component (real and imaginary parts counted separately).
inline double inf_norm(const State& u) {
    double m = 0.0;
    for (const auto& z : u.psi) m = std::max({m, std::abs(z.real()), std::abs(z.imag())});
    for (double v : u.a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace glcert
