#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace glcert::numeric {

/// Pairwise (tree) summation of f(0) + ... + f(n-1).
///
/// The split points depend only on n, so the rounding pattern is fixed for a
/// given problem size no matter how the terms are produced.
template <typename F>
double pairwise_sum(std::size_t begin, std::size_t end, const F& f) {
    constexpr std::size_t kLeaf = 32;
    if (end - begin <= kLeaf) {
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) s += f(i);
        return s;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    return pairwise_sum(begin, mid, f) + pairwise_sum(mid, end, f);
}

template <typename F>
double pairwise_sum(std::size_t n, const F& f) {
    return pairwise_sum(std::size_t{0}, n, f);
}

/// Integral of 2*pi*r * r^(-p) over r in [r1, r2], i.e. the integral of |x|^(-p)
/// over the planar annulus r1 < |x| < r2. Handles the logarithmic case p = 2.
inline double radial_power_integral(double p, double r1, double r2) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double e = 2.0 - p;
    if (std::abs(e) < 1e-14) return two_pi * std::log(r2 / r1);
    return two_pi / e * (std::pow(r2, e) - std::pow(r1, e));
}

/// Five-point Gauss-Legendre rule on [a, b]; exact for polynomials up to degree 9.
template <typename F>
double gauss_legendre5(double a, double b, const F& f) {
    static constexpr std::array<double, 5> x = {0.0, -0.5384693101056831, 0.5384693101056831,
                                                -0.9061798459386640, 0.9061798459386640};
    static constexpr std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665,
                                                0.4786286704993665, 0.2369268850561891,
                                                0.2369268850561891};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(c + h * x[i]);
    return s * h;
}

}  // namespace glcert::numeric
