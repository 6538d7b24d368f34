#pragma once

// Uniform square lattice masked to the disk B(0, R_dom).
//
// Sites sit at integer multiples of the spacing, so each site is the center of
// one cell of area spacing^2. Links join neighboring member sites in the +x
// and +y directions; plaquettes are unit squares whose four corners are all
// members. Links or plaquettes that would touch a non-member site are absent.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glcert/errors.hpp"
#include "glcert/field_model.hpp"
#include "glcert/numeric.hpp"

namespace glcert {

enum class Axis : std::uint8_t { X, Y };

struct Site {
    int i = 0;  // integer coordinates; center is (i, j) * spacing
    int j = 0;
};

struct Link {
    int from = 0;  // site index
    int to = 0;    // site index, from + unit step along `axis`
    Axis axis = Axis::X;
};

/// Corners are counterclockwise from the lower-left one; edges are
/// bottom (+x), right (+y), top (+x), left (+y). Circulation is
/// a[bottom] + a[right] - a[top] - a[left].
struct Plaquette {
    std::array<int, 4> corners{};
    std::array<int, 4> edges{};
    int i = 0;  // lower-left integer coordinates
    int j = 0;
};

class Lattice {
public:
    Lattice(double R_dom, double spacing) : R_dom_(R_dom), spacing_(spacing) {
        if (!(spacing > 0.0) || !std::isfinite(spacing) || !std::isfinite(R_dom))
            throw DomainError("lattice: spacing must be positive and finite");
        if (R_dom < 4.0 * spacing)
            throw DomainError("lattice too coarse: R_dom=" + std::to_string(R_dom) +
                              " < 4*spacing=" + std::to_string(4.0 * spacing));
        build();
    }

    [[nodiscard]] double spacing() const { return spacing_; }
    [[nodiscard]] double R_dom() const { return R_dom_; }
    [[nodiscard]] double cell_area() const { return spacing_ * spacing_; }
    [[nodiscard]] int half_width() const { return half_; }

    [[nodiscard]] std::size_t num_sites() const { return sites_.size(); }
    [[nodiscard]] std::size_t num_links() const { return links_.size(); }
    [[nodiscard]] std::size_t num_plaquettes() const { return plaquettes_.size(); }

    [[nodiscard]] const std::vector<Site>& sites() const { return sites_; }
    [[nodiscard]] const std::vector<Link>& links() const { return links_; }
    [[nodiscard]] const std::vector<Plaquette>& plaquettes() const { return plaquettes_; }

    [[nodiscard]] Point site_center(std::size_t s) const {
        return {sites_[s].i * spacing_, sites_[s].j * spacing_};
    }
    [[nodiscard]] Point link_midpoint(std::size_t l) const {
        const Point p = site_center(static_cast<std::size_t>(links_[l].from));
        const double h = 0.5 * spacing_;
        return links_[l].axis == Axis::X ? Point{p.x + h, p.y} : Point{p.x, p.y + h};
    }
    [[nodiscard]] Point plaquette_center(std::size_t p) const {
        return {(plaquettes_[p].i + 0.5) * spacing_, (plaquettes_[p].j + 0.5) * spacing_};
    }

    /// Membership of the point (i, j) * spacing.
    [[nodiscard]] bool is_member(int i, int j) const { return site_index(i, j) >= 0; }

    /// Site index of integer coordinates, or -1 when not a member.
    [[nodiscard]] int site_index(int i, int j) const {
        if (i < -half_ || i > half_ || j < -half_ || j > half_) return -1;
        return grid_[grid_offset(i, j)];
    }

    /// Outgoing +x / +y link of a site, or -1 when the neighbor is not a member.
    [[nodiscard]] int link_from(std::size_t site, Axis axis) const {
        return axis == Axis::X ? xlink_[site] : ylink_[site];
    }

private:
    [[nodiscard]] std::size_t grid_offset(int i, int j) const {
        const auto w = static_cast<std::size_t>(2 * half_ + 1);
        return static_cast<std::size_t>(j + half_) * w + static_cast<std::size_t>(i + half_);
    }

    void build() {
        const double radius_cells = R_dom_ / spacing_;
        half_ = static_cast<int>(std::floor(radius_cells)) + 1;
        const double r2 = radius_cells * radius_cells * (1.0 + 1e-12);
        const auto w = static_cast<std::size_t>(2 * half_ + 1);
        grid_.assign(w * w, -1);

        // Row-major: j outer, i inner.
        for (int j = -half_; j <= half_; ++j)
            for (int i = -half_; i <= half_; ++i)
                if (static_cast<double>(i) * i + static_cast<double>(j) * j <= r2) {
                    grid_[grid_offset(i, j)] = static_cast<int>(sites_.size());
                    sites_.push_back({i, j});
                }

        xlink_.assign(sites_.size(), -1);
        ylink_.assign(sites_.size(), -1);
        for (std::size_t s = 0; s < sites_.size(); ++s) {
            const auto [i, j] = sites_[s];
            if (const int t = site_index(i + 1, j); t >= 0) {
                xlink_[s] = static_cast<int>(links_.size());
                links_.push_back({static_cast<int>(s), t, Axis::X});
            }
            if (const int t = site_index(i, j + 1); t >= 0) {
                ylink_[s] = static_cast<int>(links_.size());
                links_.push_back({static_cast<int>(s), t, Axis::Y});
            }
        }

        for (std::size_t s = 0; s < sites_.size(); ++s) {
            const auto [i, j] = sites_[s];
            const int lr = site_index(i + 1, j);
            const int ur = site_index(i + 1, j + 1);
            const int ul = site_index(i, j + 1);
            if (lr < 0 || ur < 0 || ul < 0) continue;
            Plaquette p;
            p.corners = {static_cast<int>(s), lr, ur, ul};
            p.edges = {xlink_[s], ylink_[static_cast<std::size_t>(lr)],
                       xlink_[static_cast<std::size_t>(ul)], ylink_[s]};
            p.i = i;
            p.j = j;
            plaquettes_.push_back(p);
        }
    }

    double R_dom_;
    double spacing_;
    int half_ = 0;
    std::vector<int> grid_;
    std::vector<Site> sites_;
    std::vector<Link> links_;
    std::vector<Plaquette> plaquettes_;
    std::vector<int> xlink_;
    std::vector<int> ylink_;
};

inline Lattice build_lattice(double R_dom, double spacing) { return Lattice(R_dom, spacing); }

/// Midpoint rule: spacing^2 * sum of per-site values.
inline double integrate(const Lattice& lat, std::span<const double> values) {
    if (values.size() != lat.num_sites())
        throw ShapeError("integrate: got " + std::to_string(values.size()) + " values for " +
                         std::to_string(lat.num_sites()) + " sites");
    return lat.cell_area() * numeric::pairwise_sum(values.size(), [&](std::size_t k) { return values[k]; });
}

/// Midpoint rule over plaquette cells.
inline double integrate_plaquettes(const Lattice& lat, std::span<const double> values) {
    if (values.size() != lat.num_plaquettes())
        throw ShapeError("integrate_plaquettes: got " + std::to_string(values.size()) +
                         " values for " + std::to_string(lat.num_plaquettes()) + " plaquettes");
    return lat.cell_area() * numeric::pairwise_sum(values.size(), [&](std::size_t k) { return values[k]; });
}

}  // namespace glcert
