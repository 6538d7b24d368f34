#pragma once

// Numerical evaluation of the energy lower-bound chain on a discrete state.
//
// For a state (psi, a) with energy G, a cutoff chi_R and the annulus
// Omega_R = {R0 < |x| < R}, the chain is
//
//   G >= K_R >= 1/2 int_{B_R} B |chi_R psi|^2 - C/R^2 int_{R/2<|x|<R} |psi|^2      (cutoff lemma)
//     >= 1/2 int_Omega B |chi_R psi|^2 - C0
//   int_Omega B |chi_R psi|^2 = int_Omega H |chi_R psi|^2 + int_Omega (B - H) |chi_R psi|^2
//   |int_Omega (B - H) |chi_R psi|^2| <= (int_Omega (B - H)^2)^(1/2) |Omega|^(1/2) <= G^(1/2) |Omega|^(1/2)
//   int_Omega H |chi_R psi|^2 >= int_Omega h|x|^-alpha |chi_R psi|^2 >= int_{Omega_{R/2}} h|x|^-alpha |psi|^2
//     >= annulus(h, alpha, R0, R/2) - (2 G)^(1/2) (int_{Omega_{R/2}} h^2 |x|^-2alpha)^(1/2)
//
// Every integral is the lattice midpoint rule on plaquette centers (B lives
// there) or on sites; |psi|^2 at a plaquette center is the corner average.
// Each step records both sides so the report can be re-checked by hand.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "glcert/energy.hpp"
#include "glcert/errors.hpp"
#include "glcert/field_model.hpp"
#include "glcert/lattice.hpp"
#include "glcert/numeric.hpp"
#include "glcert/state.hpp"

namespace glcert {

/// Radial cutoff chi with chi = 1 on [0, 1/2], chi = 0 on [1, inf).
struct Cutoff {
    std::function<double(double)> profile;
    std::function<double(double)> derivative;
    double deriv_sup_sq = 0.0;  // sup |chi'|^2

    /// chi(t) = cos^2(pi (t - 1/2)) on [1/2, 1]. C^1, |chi'| peaks at t = 3/4 with value pi.
    static Cutoff cosine() {
        constexpr double pi = std::numbers::pi;
        Cutoff c;
        c.profile = [](double t) {
            if (t <= 0.5) return 1.0;
            if (t >= 1.0) return 0.0;
            const double u = std::cos(pi * (t - 0.5));
            return u * u;
        };
        c.derivative = [](double t) {
            if (t <= 0.5 || t >= 1.0) return 0.0;
            return -pi * std::sin(2.0 * pi * (t - 0.5));
        };
        c.deriv_sup_sq = pi * pi;
        return c;
    }
};

/// chi_R(x) = chi(|x| / R)
inline double chi_R(const Cutoff& cutoff, Point p, double R) {
    if (!(R > 0.0)) throw DomainError("chi_R requires R > 0");
    return cutoff.profile(p.norm() / R);
}

// ---- Maximum modulus -------------------------------------------------------

struct MaxModulusReport {
    double max_abs_psi = 0.0;
    bool passes = false;
};

inline MaxModulusReport max_modulus_check(const State& s, double tol_mm = 1e-3) {
    MaxModulusReport r;
    for (const auto& z : s.psi) r.max_abs_psi = std::max(r.max_abs_psi, std::abs(z));
    r.passes = r.max_abs_psi <= 1.0 + tol_mm;
    return r;
}

// ---- Cutoff kinetic bound --------------------------------------------------

struct ShopReport {
    double lhs = 0.0;    // kinetic energy on links inside B(0,R)
    double rhs = 0.0;    // 1/2 int B |chi_R psi|^2 - C/R^2 int_{annulus} |psi|^2
    double slack = 0.0;  // lhs - rhs
    double tol = 0.0;
    bool holds = false;

    // Pieces of rhs, kept for the chain.
    double field_term = 0.0;    // 1/2 int_{B_R} B |chi_R psi|^2
    double annulus_mass = 0.0;  // int_{R/2<|x|<R} |psi|^2
    double cutoff_term = 0.0;   // C/R^2 * annulus_mass
};

namespace detail {

inline void require_certificate_radius(const Lattice& lat, double R) {
    if (R > lat.R_dom() * (1.0 + 1e-12))
        throw DomainError("certificate radius R=" + std::to_string(R) + " exceeds the domain radius " +
                          std::to_string(lat.R_dom()));
    if (R < 8.0 * lat.spacing())
        throw DomainError("certificate radius R=" + std::to_string(R) + " is below 8 lattice spacings");
}

inline bool link_inside(const Lattice& lat, std::size_t l, double R) {
    const auto& ln = lat.links()[l];
    return lat.site_center(static_cast<std::size_t>(ln.from)).norm() <= R &&
           lat.site_center(static_cast<std::size_t>(ln.to)).norm() <= R;
}

}  // namespace detail

/// Discrete form of the cutoff lemma; `tol_rel` scales the allowed
/// discretization slack as tol_rel * (1 + |lhs|).
inline ShopReport shop_inequality(const Lattice& lat, const State& s, double R, const Cutoff& cutoff,
                                  double tol_rel = 1e-2) {
    s.require_shape(lat, "shop_inequality");
    detail::require_certificate_radius(lat, R);
    const double dx2 = lat.cell_area();

    const auto kin = link_kinetic(lat, s);
    const auto b = curl_plaquette(lat, s);
    const auto rho = plaquette_density(lat, s);

    ShopReport r;
    r.lhs = numeric::pairwise_sum(kin.size(), [&](std::size_t l) {
        return detail::link_inside(lat, l, R) ? kin[l] : 0.0;
    });
    r.field_term = 0.5 * dx2 * numeric::pairwise_sum(b.size(), [&](std::size_t p) {
        const Point c = lat.plaquette_center(p);
        if (c.norm() >= R) return 0.0;
        const double chi = chi_R(cutoff, c, R);
        return b[p] * chi * chi * rho[p];
    });
    r.annulus_mass = dx2 * numeric::pairwise_sum(s.psi.size(), [&](std::size_t j) {
        const double d = lat.site_center(j).norm();
        return (d > 0.5 * R && d < R) ? std::norm(s.psi[j]) : 0.0;
    });
    r.cutoff_term = cutoff.deriv_sup_sq / (R * R) * r.annulus_mass;
    r.rhs = r.field_term - r.cutoff_term;
    r.slack = r.lhs - r.rhs;
    r.tol = tol_rel * (1.0 + std::abs(r.lhs));
    r.holds = r.lhs >= r.rhs - r.tol;
    return r;
}

// ---- final bound ------------------------------------------------------------

/// 2^(alpha-1) pi h / (2 - alpha) R^(2-alpha) - C_lin R^(1-alpha) - C_lin R - C_const - C0
inline double eq7_lower_bound(double h, double alpha, double R, double R0, double C0, double C_lin,
                              double C_const) {
    if (!(alpha < 1.0)) throw RegimeError("eq7_lower_bound requires alpha < 1");
    if (!(R0 > 0.0) || !(R > 2.0 * R0)) throw DomainError("eq7_lower_bound requires R > 2 R0 > 0");
    return std::pow(2.0, alpha - 1.0) * std::numbers::pi * h / (2.0 - alpha) * std::pow(R, 2.0 - alpha) -
           C_lin * std::pow(R, 1.0 - alpha) - C_lin * R - C_const - C0;
}

// ---- chain ------------------------------------------------------------------

enum class Relation { GreaterEq, LessEq, Equal };

inline const char* to_string(Relation r) {
    switch (r) {
        case Relation::GreaterEq: return ">=";
        case Relation::LessEq: return "<=";
        case Relation::Equal: return "==";
    }
    return "?";
}

struct ChainStep {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    Relation relation = Relation::GreaterEq;
    double tol = 0.0;
    bool pass = false;

    /// Signed margin in the direction of the relation (negative means violated).
    [[nodiscard]] double slack() const {
        switch (relation) {
            case Relation::GreaterEq: return lhs - rhs;
            case Relation::LessEq: return rhs - lhs;
            case Relation::Equal: return -std::abs(lhs - rhs);
        }
        return 0.0;
    }
};

struct CertificateTolerances {
    double disc = 1e-2;       // relative discretization slack per inequality
    double max_modulus = 1e-3;
    double identity = 1e-9;   // for exact algebraic splits
};

struct CertificateReport {
    double R = 0.0;
    double R0 = 0.0;
    double h = 0.0;
    double alpha = 0.0;
    double spacing = 0.0;
    EnergyBreakdown energy;

    double max_abs_psi = 0.0;
    double kinetic_lhs = 0.0;     // kinetic energy inside B(0,R)
    double shop_rhs = 0.0;        // cutoff-lemma right side
    double C = 0.0;               // sup |chi'|^2
    double annulus_mass = 0.0;    // int_{R/2<|x|<R} |psi|^2
    double inner_field_term = 0.0;  // 1/2 int_{B(0,R0)} B |chi_R psi|^2
    double C0 = 0.0;              // 1/2 |inner term| + C/R^2 annulus_mass

    double omega_area = 0.0;      // |Omega_R|
    double B_omega = 0.0;         // int_Omega B |chi_R psi|^2
    double H_omega = 0.0;         // int_Omega H |chi_R psi|^2
    double BmH_omega = 0.0;       // int_Omega (B - H) |chi_R psi|^2
    double field_omega = 0.0;     // int_Omega (B - H)^2
    double cs_inner = 0.0;        // field_omega^(1/2) |Omega|^(1/2)
    double cs_bound = 0.0;        // G^(1/2) |Omega|^(1/2)
    double hx_omega = 0.0;        // int_Omega h|x|^-alpha |chi_R psi|^2
    double hx_half = 0.0;         // int_{Omega_{R/2}} h|x|^-alpha |psi|^2
    double annulus_term = 0.0;    // closed-form int_{Omega_{R/2}} h|x|^-alpha
    double density_term = 0.0;    // (2G)^(1/2) (int_{Omega_{R/2}} h^2 |x|^-2alpha)^(1/2)
    double chain_rhs = 0.0;       // 1/2 (annulus_term - density_term - cs_bound) - C0

    bool eq7_applicable = false;  // alpha < 1
    double C_lin = std::numeric_limits<double>::quiet_NaN();
    double C_const = std::numeric_limits<double>::quiet_NaN();
    double eq7_rhs = std::numeric_limits<double>::quiet_NaN();

    std::vector<ChainStep> steps;

    [[nodiscard]] bool all_pass() const {
        return std::all_of(steps.begin(), steps.end(), [](const ChainStep& s) { return s.pass; });
    }
    [[nodiscard]] const ChainStep* step(const std::string& name) const {
        for (const auto& s : steps)
            if (s.name == name) return &s;
        return nullptr;
    }
};

namespace detail {

inline ChainStep make_step(std::string name, double lhs, Relation rel, double rhs, double tol) {
    ChainStep s{std::move(name), lhs, rhs, rel, tol, false};
    s.pass = s.slack() >= -tol;
    return s;
}

}  // namespace detail

/// Evaluates every inequality of the chain on `s`. The field must be Constant
/// (alpha = 0) or PowerLaw; the final closed-form bound is only evaluated for alpha < 1.
inline CertificateReport certificate_chain(const Lattice& lat, const State& s, const FieldSpec& spec,
                                           double R, double R0, const Cutoff& cutoff,
                                           const CertificateTolerances& tol = {}) {
    s.require_shape(lat, "certificate_chain");
    if (spec.kind == FieldKind::Tabulated)
        throw RegimeError("certificate_chain needs a constant or power-law field");
    if (!(R0 > 0.0) || !(R > 2.0 * R0)) throw DomainError("certificate_chain requires R > 2 R0 > 0");
    detail::require_certificate_radius(lat, R);

    CertificateReport rep;
    rep.R = R;
    rep.R0 = R0;
    rep.h = spec.h;
    rep.alpha = spec.kind == FieldKind::Constant ? 0.0 : spec.alpha;
    rep.spacing = lat.spacing();
    const double h = rep.h;
    const double alpha = rep.alpha;
    const double dx2 = lat.cell_area();

    const std::vector<double> hp = sample_field(lat, spec);
    rep.energy = energy(lat, s, hp);
    const double G = rep.energy.total;

    const auto b = curl_plaquette(lat, s);
    const auto rho = plaquette_density(lat, s);
    const std::size_t np = b.size();
    std::vector<double> chi2(np), radius(np);
    for (std::size_t p = 0; p < np; ++p) {
        const Point c = lat.plaquette_center(p);
        radius[p] = c.norm();
        const double chi = chi_R(cutoff, c, R);
        chi2[p] = chi * chi;
    }
    auto in_omega = [&](std::size_t p, double outer) { return radius[p] > R0 && radius[p] < outer; };
    auto hx = [&](std::size_t p) { return h / std::pow(radius[p], alpha); };
    auto sum_p = [&](auto&& f) { return dx2 * numeric::pairwise_sum(np, f); };

    // Maximum modulus and the cutoff bound.
    const auto mm = max_modulus_check(s, tol.max_modulus);
    rep.max_abs_psi = mm.max_abs_psi;
    const ShopReport shop = shop_inequality(lat, s, R, cutoff, tol.disc);
    rep.kinetic_lhs = shop.lhs;
    rep.shop_rhs = shop.rhs;
    rep.C = cutoff.deriv_sup_sq;
    rep.annulus_mass = shop.annulus_mass;

    // Inner ball / Omega split of the field term.
    rep.inner_field_term = 0.5 * sum_p([&](std::size_t p) {
        return radius[p] <= R0 ? b[p] * chi2[p] * rho[p] : 0.0;
    });
    rep.C0 = std::abs(rep.inner_field_term) + shop.cutoff_term;

    rep.omega_area = sum_p([&](std::size_t p) { return in_omega(p, R) ? 1.0 : 0.0; });
    rep.B_omega = sum_p([&](std::size_t p) { return in_omega(p, R) ? b[p] * chi2[p] * rho[p] : 0.0; });
    rep.H_omega = sum_p([&](std::size_t p) { return in_omega(p, R) ? hp[p] * chi2[p] * rho[p] : 0.0; });
    rep.BmH_omega = sum_p([&](std::size_t p) {
        return in_omega(p, R) ? (b[p] - hp[p]) * chi2[p] * rho[p] : 0.0;
    });
    rep.field_omega = sum_p([&](std::size_t p) {
        const double d = b[p] - hp[p];
        return in_omega(p, R) ? d * d : 0.0;
    });
    rep.cs_inner = std::sqrt(rep.field_omega) * std::sqrt(rep.omega_area);
    rep.cs_bound = std::sqrt(G) * std::sqrt(rep.omega_area);
    rep.hx_omega = sum_p([&](std::size_t p) { return in_omega(p, R) ? hx(p) * chi2[p] * rho[p] : 0.0; });
    rep.hx_half = sum_p([&](std::size_t p) { return in_omega(p, 0.5 * R) ? hx(p) * rho[p] : 0.0; });

    // Smallest margin of H over the power-law minorant on Omega.
    double hyp_margin = std::numeric_limits<double>::infinity();
    double hyp_scale = 0.0;
    for (std::size_t p = 0; p < np; ++p)
        if (in_omega(p, R)) {
            hyp_margin = std::min(hyp_margin, hp[p] - hx(p));
            hyp_scale = std::max(hyp_scale, std::abs(hp[p]));
        }
    if (!std::isfinite(hyp_margin)) hyp_margin = 0.0;

    rep.annulus_term = annulus_integral(h, alpha, R0, 0.5 * R);
    rep.density_term = std::sqrt(2.0 * G) * h *
                       std::sqrt(numeric::radial_power_integral(2.0 * alpha, R0, 0.5 * R));
    rep.chain_rhs = 0.5 * (rep.annulus_term - rep.density_term - rep.cs_bound) - rep.C0;

    auto disc = [&](double v) { return tol.disc * (1.0 + std::abs(v)); };
    using detail::make_step;
    auto& st = rep.steps;
    st.push_back(make_step("max_modulus", rep.max_abs_psi, Relation::LessEq, 1.0, tol.max_modulus));
    st.push_back(make_step("cutoff_kinetic", shop.lhs, Relation::GreaterEq, shop.rhs, disc(shop.lhs)));
    st.push_back(make_step("energy_dominates_kinetic", G, Relation::GreaterEq, shop.lhs, disc(G)));
    st.push_back(make_step("inner_ball", G, Relation::GreaterEq, 0.5 * rep.B_omega - rep.C0, disc(G)));
    st.push_back(make_step("field_split", rep.B_omega, Relation::Equal, rep.H_omega + rep.BmH_omega,
                           tol.identity * (1.0 + std::abs(rep.B_omega) + std::abs(rep.H_omega))));
    st.push_back(make_step("cauchy_schwarz", std::abs(rep.BmH_omega), Relation::LessEq, rep.cs_inner,
                           disc(rep.cs_inner)));
    st.push_back(make_step("field_le_energy", rep.cs_inner, Relation::LessEq, rep.cs_bound, disc(rep.cs_bound)));
    st.push_back(make_step("applied_field_minorant", hyp_margin, Relation::GreaterEq, 0.0,
                           1e-12 * (1.0 + hyp_scale)));
    st.push_back(make_step("field_lower_bound", rep.B_omega, Relation::GreaterEq, rep.hx_omega - rep.cs_bound,
                           disc(rep.B_omega)));
    st.push_back(make_step("cutoff_restriction", rep.hx_omega, Relation::GreaterEq, rep.hx_half,
                           disc(rep.hx_omega)));
    st.push_back(make_step("annulus_lower_bound", rep.hx_half, Relation::GreaterEq,
                           rep.annulus_term - rep.density_term, disc(rep.hx_half)));
    st.push_back(make_step("chain_bound", G, Relation::GreaterEq, rep.chain_rhs, disc(G)));

    rep.eq7_applicable = alpha < 1.0;
    if (rep.eq7_applicable) {
        // Constants implied by the chain: the density term is bounded by
        // c1 R^(1-alpha), the Cauchy-Schwarz term by c2 R.
        const double c1 = 0.5 * std::sqrt(2.0 * G) * h * std::sqrt(2.0 * std::numbers::pi / (2.0 - 2.0 * alpha)) *
                          std::pow(2.0, alpha - 1.0);
        const double c2 = 0.5 * std::sqrt(G) * std::sqrt(rep.omega_area) / R;
        rep.C_lin = std::max(c1, c2);
        rep.C_const = std::numbers::pi * h * std::pow(R0, 2.0 - alpha) / (2.0 - alpha);
        rep.eq7_rhs = eq7_lower_bound(h, alpha, R, R0, rep.C0, rep.C_lin, rep.C_const);
        st.push_back(make_step("final_bound", G, Relation::GreaterEq, rep.eq7_rhs, disc(G)));
    }
    return rep;
}

// ---- JSON -------------------------------------------------------------------

inline nlohmann::json to_json(const EnergyBreakdown& e) {
    return {{"kinetic", e.kinetic}, {"well", e.well}, {"field", e.field}, {"total", e.total}};
}

/// Version tag of the certificate JSON layout.
inline constexpr const char* kCertificateSchema = "glcert-certificate/1";

inline nlohmann::json to_json(const CertificateReport& r) {
    using nlohmann::json;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json steps = json::array();
    for (const auto& s : r.steps)
        steps.push_back({{"name", s.name},
                         {"lhs", num(s.lhs)},
                         {"relation", to_string(s.relation)},
                         {"rhs", num(s.rhs)},
                         {"slack", num(s.slack())},
                         {"tol", num(s.tol)},
                         {"pass", s.pass}});
    return {{"schema", kCertificateSchema},
            {"R", r.R},
            {"R0", r.R0},
            {"h", r.h},
            {"alpha", r.alpha},
            {"spacing", r.spacing},
            {"energy", to_json(r.energy)},
            {"max_abs_psi", r.max_abs_psi},
            {"kinetic_lhs", r.kinetic_lhs},
            {"shop_rhs", r.shop_rhs},
            {"C", r.C},
            {"annulus_mass", r.annulus_mass},
            {"inner_field_term", r.inner_field_term},
            {"C0", r.C0},
            {"omega_area", r.omega_area},
            {"B_omega", r.B_omega},
            {"H_omega", r.H_omega},
            {"BmH_omega", r.BmH_omega},
            {"field_omega", r.field_omega},
            {"cs_inner", r.cs_inner},
            {"cs_bound", r.cs_bound},
            {"hx_omega", r.hx_omega},
            {"hx_half", r.hx_half},
            {"annulus_term", r.annulus_term},
            {"density_term", r.density_term},
            {"chain_rhs", r.chain_rhs},
            {"eq7_applicable", r.eq7_applicable},
            {"C_lin", num(r.C_lin)},
            {"C_const", num(r.C_const)},
            {"eq7_rhs", num(r.eq7_rhs)},
            {"steps", steps},
            {"all_pass", r.all_pass()}};
}

}  // namespace glcert
