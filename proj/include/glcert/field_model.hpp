#pragma once

// Applied magnetic field profiles H(x) on the plane and their exact disk /
// annulus integrals.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "glcert/errors.hpp"
#include "glcert/numeric.hpp"

namespace glcert {

struct Point {
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] double norm() const { return std::hypot(x, y); }
};

enum class FieldKind { Constant, PowerLaw, Tabulated };

/// Radial applied field. PowerLaw is h / max(|x|, r_cut)^alpha; Tabulated is a
/// piecewise-linear profile in |x|.
struct FieldSpec {
    FieldKind kind = FieldKind::Constant;
    double h = 0.0;
    double alpha = 0.0;
    double r_cut = 0.0;
    std::vector<std::pair<double, double>> table;  // (radius, value), radius increasing

    static FieldSpec constant(double h) {
        FieldSpec s;
        s.kind = FieldKind::Constant;
        s.h = h;
        return s;
    }

    static FieldSpec power_law(double h, double alpha, double r_cut) {
        FieldSpec s;
        s.kind = FieldKind::PowerLaw;
        s.h = h;
        s.alpha = alpha;
        s.r_cut = r_cut;
        return s;
    }

    static FieldSpec tabulated(std::vector<std::pair<double, double>> table) {
        FieldSpec s;
        s.kind = FieldKind::Tabulated;
        s.table = std::move(table);
        return s;
    }

    /// Throws ConfigError when an invariant is broken.
    void validate() const {
        switch (kind) {
            case FieldKind::Constant:
                // h = 0 is the zero field used for ground-state checks.
                if (!(h >= 0.0) || !std::isfinite(h)) throw ConfigError("field: h must be >= 0");
                break;
            case FieldKind::PowerLaw:
                if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("field: h must be > 0");
                if (!std::isfinite(alpha)) throw ConfigError("field: alpha must be finite");
                if (!(r_cut > 0.0) || !std::isfinite(r_cut))
                    throw ConfigError("field: r_cut must be > 0");
                break;
            case FieldKind::Tabulated:
                if (table.size() < 2) throw ConfigError("field: table needs at least 2 samples");
                for (std::size_t i = 0; i < table.size(); ++i) {
                    if (!std::isfinite(table[i].first) || !std::isfinite(table[i].second))
                        throw ConfigError("field: table entries must be finite");
                    if (i > 0 && !(table[i].first > table[i - 1].first))
                        throw ConfigError("field: table radii must be strictly increasing");
                }
                break;
        }
    }
};

namespace detail {

inline double table_value(const FieldSpec& spec, double r) {
    const auto& t = spec.table;
    if (r < t.front().first || r > t.back().first)
        throw RangeError("tabulated field queried at r=" + std::to_string(r) +
                         " outside [" + std::to_string(t.front().first) + ", " +
                         std::to_string(t.back().first) + "]");
    auto it = std::upper_bound(t.begin(), t.end(), r,
                               [](double v, const auto& s) { return v < s.first; });
    if (it == t.end()) return t.back().second;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (r - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

inline double eval_radial(const FieldSpec& spec, double r) {
    switch (spec.kind) {
        case FieldKind::Constant: return spec.h;
        case FieldKind::PowerLaw: return spec.h / std::pow(std::max(r, spec.r_cut), spec.alpha);
        case FieldKind::Tabulated: return table_value(spec, r);
    }
    return 0.0;
}

// Integral of H^p over B(0, R), p in {1, 2}.
inline double disk_moment(const FieldSpec& spec, double R, int p) {
    constexpr double pi = std::numbers::pi;
    switch (spec.kind) {
        case FieldKind::Constant: return std::pow(spec.h, p) * pi * R * R;
        case FieldKind::PowerLaw: {
            const double core = std::pow(spec.h / std::pow(spec.r_cut, spec.alpha), p);
            if (R <= spec.r_cut) return core * pi * R * R;
            return core * pi * spec.r_cut * spec.r_cut +
                   std::pow(spec.h, p) *
                       numeric::radial_power_integral(p * spec.alpha, spec.r_cut, R);
        }
        case FieldKind::Tabulated: {
            const auto& t = spec.table;
            if (t.front().first > 0.0 || R > t.back().first)
                throw RangeError("tabulated field does not cover [0, " + std::to_string(R) + "]");
            // Piecewise polynomial integrand: Gauss-Legendre per segment is exact.
            double total = 0.0;
            for (std::size_t i = 1; i < t.size(); ++i) {
                const double a = std::max(t[i - 1].first, 0.0);
                const double b = std::min(t[i].first, R);
                if (b <= a) continue;
                total += numeric::gauss_legendre5(a, b, [&](double r) {
                    return 2.0 * pi * r * std::pow(table_value(spec, r), p);
                });
            }
            return total;
        }
    }
    return 0.0;
}

}  // namespace detail

/// Applied field at a point.
inline double eval_H(const FieldSpec& spec, Point p) {
    return detail::eval_radial(spec, p.norm());
}

/// Exact integral of h/|x|^alpha over R0 < |x| < R.
inline double annulus_integral(double h, double alpha, double R0, double R) {
    if (!(R0 > 0.0) || !(R > R0))
        throw DomainError("annulus_integral requires 0 < R0 < R");
    if (alpha == 2.0) throw UnsupportedError("annulus_integral: alpha = 2 has no power closed form");
    return 2.0 * std::numbers::pi * h / (2.0 - alpha) *
           (std::pow(R, 2.0 - alpha) - std::pow(R0, 2.0 - alpha));
}

/// Integral of H^2 over B(0, R), with the r_cut clamp accounted for.
inline double l2_mass_on_disk(const FieldSpec& spec, double R) {
    if (!(R > 0.0)) throw DomainError("l2_mass_on_disk requires R > 0");
    return detail::disk_moment(spec, R, 2);
}

/// Integral of H over B(0, R).
inline double l1_mass_on_disk(const FieldSpec& spec, double R) {
    if (!(R > 0.0)) throw DomainError("l1_mass_on_disk requires R > 0");
    return detail::disk_moment(spec, R, 1);
}

enum class L2Class { InL2, NotInL2 };

/// Whether H is square integrable on the whole plane. A finite table says
/// nothing about the tail, so Tabulated is rejected.
inline L2Class classify_L2_plane(const FieldSpec& spec) {
    switch (spec.kind) {
        case FieldKind::Constant: return L2Class::NotInL2;
        case FieldKind::PowerLaw:
            return (spec.alpha > 1.0 && spec.r_cut > 0.0) ? L2Class::InL2 : L2Class::NotInL2;
        case FieldKind::Tabulated:
            throw UnsupportedError("classify_L2_plane: tabulated field has no tail information");
    }
    return L2Class::NotInL2;
}

inline const char* to_string(L2Class c) { return c == L2Class::InL2 ? "in_L2" : "not_in_L2"; }

struct ReverseHolderReport {
    double R = 0.0;
    double lhs = 0.0;  // integral of H over B(0,R)
    double rhs = 0.0;  // |B(0,R)|^(1/2) * (integral of H^2)^(1/2)
    bool holds = false;
};

/// One-radius check of  int_B H >= |B|^(1/2) (int_B H^2)^(1/2).
///
/// Cauchy-Schwarz gives the reverse direction, so the inequality can only hold
/// with equality up to rounding; `holds` allows 1e-12 relative slack for that.
inline ReverseHolderReport reverse_holder_check(const FieldSpec& spec, double R) {
    ReverseHolderReport rep;
    rep.R = R;
    rep.lhs = l1_mass_on_disk(spec, R);
    rep.rhs = std::sqrt(std::numbers::pi * R * R) * std::sqrt(l2_mass_on_disk(spec, R));
    rep.holds = rep.lhs >= rep.rhs * (1.0 - 1e-12);
    return rep;
}

// ---- JSON -----------------------------------------------------------------

inline const char* to_string(FieldKind k) {
    switch (k) {
        case FieldKind::Constant: return "constant";
        case FieldKind::PowerLaw: return "power_law";
        case FieldKind::Tabulated: return "tabulated";
    }
    return "?";
}

inline nlohmann::json field_to_json(const FieldSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    j["h"] = spec.h;
    j["alpha"] = spec.alpha;
    j["r_cut"] = spec.r_cut;
    nlohmann::json t = nlohmann::json::array();
    for (const auto& [r, v] : spec.table) t.push_back({r, v});
    j["table"] = t;
    return j;
}

/// Parses a field object. A missing or null r_cut falls back to `default_r_cut`.
inline FieldSpec field_from_json(const nlohmann::json& j, double default_r_cut = 0.0) {
    if (!j.is_object()) throw ConfigError("field: expected an object");
    auto number = [&](const char* key, std::optional<double> fallback) -> double {
        if (!j.contains(key) || j.at(key).is_null()) {
            if (fallback) return *fallback;
            throw ConfigError(std::string("field.") + key + ": missing");
        }
        if (!j.at(key).is_number()) throw ConfigError(std::string("field.") + key + ": expected a number");
        return j.at(key).get<double>();
    };
    if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("field.kind: missing or not a string");
    const auto kind = j.at("kind").get<std::string>();
    FieldSpec spec;
    if (kind == "constant") {
        spec = FieldSpec::constant(number("h", std::nullopt));
    } else if (kind == "power_law") {
        spec = FieldSpec::power_law(number("h", std::nullopt), number("alpha", std::nullopt),
                                    number("r_cut", default_r_cut));
    } else if (kind == "tabulated") {
        if (!j.contains("table") || !j.at("table").is_array()) throw ConfigError("field.table: expected an array");
        std::vector<std::pair<double, double>> table;
        for (const auto& row : j.at("table")) {
            if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
                throw ConfigError("field.table: rows must be [r, v] number pairs");
            table.emplace_back(row[0].get<double>(), row[1].get<double>());
        }
        spec = FieldSpec::tabulated(std::move(table));
        spec.h = number("h", 0.0);
        spec.alpha = number("alpha", 0.0);
    } else {
        throw ConfigError("field.kind: unknown kind '" + kind + "'");
    }
    spec.validate();
    return spec;
}

}  // namespace glcert
