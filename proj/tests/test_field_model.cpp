#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "glcert/field_model.hpp"
#include "support.hpp"

using namespace glcert;
using glcert::testing::Gen;
using glcert::testing::polar_midpoint;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(EvalH, ConstantIsConstant) { EXPECT_EQ(eval_H(FieldSpec::constant(0.5), {7, -3}), 0.5); }

TEST(EvalH, PowerLawAtDistanceFive) {
    EXPECT_NEAR(eval_H(FieldSpec::power_law(2, 1, 0.1), {3, 4}), 0.4, 1e-15);
}

TEST(EvalH, OriginClampedToCutRadius) {
    EXPECT_NEAR(eval_H(FieldSpec::power_law(1, 0.5, 0.1), {0, 0}), 3.16227766016838, 1e-12);
}

TEST(EvalH, TabulatedInterpolatesLinearly) {
    const auto spec = FieldSpec::tabulated({{0.0, 1.0}, {2.0, 3.0}, {4.0, 3.0}});
    EXPECT_DOUBLE_EQ(eval_H(spec, {1.0, 0.0}), 2.0);
    EXPECT_DOUBLE_EQ(eval_H(spec, {0.0, 3.0}), 3.0);
    EXPECT_THROW(eval_H(spec, {5.0, 0.0}), RangeError);
}

TEST(FieldSpecValidate, RejectsBadParameters) {
    EXPECT_THROW(FieldSpec::constant(-1).validate(), ConfigError);
    EXPECT_THROW(FieldSpec::power_law(0, 0.5, 0.1).validate(), ConfigError);
    EXPECT_THROW(FieldSpec::power_law(1, 0.5, 0.0).validate(), ConfigError);
    EXPECT_THROW(FieldSpec::tabulated({{0, 1}}).validate(), ConfigError);
    EXPECT_THROW(FieldSpec::tabulated({{0, 1}, {0, 2}}).validate(), ConfigError);
    EXPECT_NO_THROW(FieldSpec::constant(0).validate());
}

TEST(AnnulusIntegral, AreaForAlphaZero) { EXPECT_NEAR(annulus_integral(1, 0, 1, 2), 3 * pi, 1e-12); }

TEST(AnnulusIntegral, AlphaOne) { EXPECT_NEAR(annulus_integral(1, 1, 1, 2), 2 * pi, 1e-12); }

TEST(AnnulusIntegral, MatchesPolarQuadrature) {
    const double q = polar_midpoint([](double r) { return 2.0 / std::sqrt(r); }, 1.0, 4.0);
    EXPECT_NEAR(q, 56 * pi / 3, 1e-6);
    EXPECT_NEAR(annulus_integral(2, 0.5, 1, 4), q, 1e-6);
}

TEST(AnnulusIntegral, Errors) {
    EXPECT_THROW(annulus_integral(1, 0.5, 2, 2), DomainError);
    EXPECT_THROW(annulus_integral(1, 0.5, 0, 2), DomainError);
    EXPECT_THROW(annulus_integral(1, 2.0, 1, 2), UnsupportedError);
}

TEST(AnnulusIntegral, AdditiveOverRandomTriples) {
    Gen g(11);
    for (int t = 0; t < 500; ++t) {
        const double r0 = g.uniform(0.01, 5), r1 = r0 + g.uniform(0.01, 5), r2 = r1 + g.uniform(0.01, 50);
        double alpha = g.uniform(-1, 1.99);
        const double h = g.uniform(0.01, 10);
        const double whole = annulus_integral(h, alpha, r0, r2);
        const double parts = annulus_integral(h, alpha, r0, r1) + annulus_integral(h, alpha, r1, r2);
        EXPECT_NEAR(parts, whole, 1e-12 * std::abs(whole)) << "alpha=" << alpha;
    }
}

TEST(AnnulusIntegral, AlphaZeroIsAreaFormula) {
    Gen g(12);
    for (int t = 0; t < 500; ++t) {
        const double r0 = g.uniform(0.01, 10), r = r0 + g.uniform(0.01, 100), h = g.uniform(0.01, 10);
        const double area = h * pi * (r * r - r0 * r0);
        EXPECT_NEAR(annulus_integral(h, 0, r0, r), area, 1e-12 * area);
    }
}

TEST(L2Mass, ConstantUnitDisk) { EXPECT_NEAR(l2_mass_on_disk(FieldSpec::constant(1), 1), pi, 1e-14); }

TEST(L2Mass, InverseSqrtProfileTendsToTwoPi) {
    // 2 pi r * r^-1 integrates to 2 pi on (0, 1); the clamp adds O(r_cut).
    const double oracle = polar_midpoint([](double r) { return 1.0 / r; }, 0.0, 1.0);
    EXPECT_NEAR(oracle, 2 * pi, 1e-9);
    for (double rc : {1e-3, 1e-5, 1e-8}) {
        const double v = l2_mass_on_disk(FieldSpec::power_law(1, 0.5, rc), 1);
        EXPECT_NEAR(v, oracle, 2 * pi * rc * 1.01);
    }
}

TEST(L2Mass, AlphaZeroPowerLawIsConstant) {
    EXPECT_NEAR(l2_mass_on_disk(FieldSpec::power_law(1, 0, 0.1), 2), 4 * pi, 1e-12);
}

TEST(L2Mass, ClampedCoreMatchesQuadrature) {
    const auto spec = FieldSpec::power_law(1.5, 0.8, 0.3);
    const double q = polar_midpoint([&](double r) { return std::pow(detail::eval_radial(spec, r), 2); }, 0, 5);
    EXPECT_NEAR(l2_mass_on_disk(spec, 5), q, 1e-6 * q);
    const double q1 = polar_midpoint([&](double r) { return detail::eval_radial(spec, r); }, 0, 5);
    EXPECT_NEAR(l1_mass_on_disk(spec, 5), q1, 1e-6 * q1);
}

TEST(L2Mass, TabulatedUsesExactSegmentQuadrature) {
    const auto spec = FieldSpec::tabulated({{0.0, 2.0}, {1.0, 1.0}, {3.0, 0.0}});
    const double q = polar_midpoint([&](double r) { return std::pow(detail::eval_radial(spec, r), 2); }, 0, 2.5);
    EXPECT_NEAR(l2_mass_on_disk(spec, 2.5), q, 1e-8);
    EXPECT_THROW(l2_mass_on_disk(spec, 4.0), RangeError);
}

TEST(ClassifyL2, RemarkOneBoundary) {
    EXPECT_EQ(classify_L2_plane(FieldSpec::power_law(1, 1.5, 0.1)), L2Class::InL2);
    EXPECT_EQ(classify_L2_plane(FieldSpec::power_law(1, 1.0, 0.1)), L2Class::NotInL2);
    EXPECT_EQ(classify_L2_plane(FieldSpec::constant(1)), L2Class::NotInL2);
    EXPECT_THROW(classify_L2_plane(FieldSpec::tabulated({{0, 1}, {1, 1}})), UnsupportedError);
}

TEST(ClassifyL2, MonotoneInAlpha) {
    Gen g(3);
    for (int t = 0; t < 1000; ++t) {
        const double a = g.uniform(-2, 4), b = a + g.uniform(0, 2);
        if (classify_L2_plane(FieldSpec::power_law(1, a, 0.1)) == L2Class::InL2) {
            EXPECT_EQ(classify_L2_plane(FieldSpec::power_law(1, b, 0.1)), L2Class::InL2);
        }
    }
}

TEST(ReverseHolder, ConstantIsEquality) {
    const auto r = reverse_holder_check(FieldSpec::constant(2), 3);
    EXPECT_NEAR(r.lhs, 18 * pi, 1e-12);
    EXPECT_NEAR(r.rhs, 18 * pi, 1e-12);
    EXPECT_TRUE(r.holds);
}

TEST(ReverseHolder, ConstantEqualityAtRandomRadii) {
    Gen g(4);
    for (int t = 0; t < 200; ++t) {
        const auto r = reverse_holder_check(FieldSpec::constant(g.uniform(0.01, 10)), g.uniform(0.01, 100));
        EXPECT_TRUE(r.holds);
        EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-9 * r.lhs);
    }
}

TEST(ReverseHolder, InverseSqrtRatio) {
    // Closed form on the unit disk with r_cut -> 0:
    // lhs = 2 pi / 1.5, rhs = sqrt(pi) sqrt(2 pi), ratio = (2/1.5) / sqrt(2) = (2/(2-a)) sqrt(1-a).
    const double closed = (2.0 / 1.5) * std::sqrt(0.5);
    EXPECT_NEAR(closed, 0.9428090415820634, 1e-15);
    const auto r = reverse_holder_check(FieldSpec::power_law(1, 0.5, 1e-9), 1);
    EXPECT_NEAR(r.lhs / r.rhs, closed, 1e-6);
    EXPECT_FALSE(r.holds);
}

TEST(ReverseHolder, NearConstantPowerLaw) {
    const auto r = reverse_holder_check(FieldSpec::power_law(1, 0, 0.01), 10);
    EXPECT_TRUE(r.holds);
    EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-3 * r.lhs);
}

TEST(EvalH, NonNegativeOnRandomPoints) {
    Gen g(5);
    for (int t = 0; t < 2000; ++t) {
        const Point p{g.uniform(-50, 50), g.uniform(-50, 50)};
        EXPECT_GE(eval_H(FieldSpec::power_law(g.uniform(0.01, 5), g.uniform(-2, 3), g.uniform(0.01, 1)), p), 0.0);
        EXPECT_GE(eval_H(FieldSpec::constant(g.uniform(0, 5)), p), 0.0);
    }
}

TEST(FieldJson, RoundTrip) {
    for (const auto& spec : {FieldSpec::constant(0.5), FieldSpec::power_law(0.5, 1.5, 0.125),
                             FieldSpec::tabulated({{0, 1}, {2, 0.5}})}) {
        const auto back = field_from_json(field_to_json(spec));
        EXPECT_EQ(back.kind, spec.kind);
        EXPECT_EQ(back.h, spec.h);
        EXPECT_EQ(back.alpha, spec.alpha);
        EXPECT_EQ(back.r_cut, spec.r_cut);
        EXPECT_EQ(back.table, spec.table);
    }
}

TEST(FieldJson, DefaultCutRadiusAndErrors) {
    const auto spec = field_from_json({{"kind", "power_law"}, {"h", 0.5}, {"alpha", 0.5}}, 0.125);
    EXPECT_EQ(spec.r_cut, 0.125);
    EXPECT_THROW(field_from_json({{"kind", "dipole"}, {"h", 1}}), ConfigError);
    EXPECT_THROW(field_from_json({{"kind", "constant"}}), ConfigError);
    EXPECT_THROW(field_from_json({{"kind", "constant"}, {"h", "big"}}), ConfigError);
    EXPECT_THROW(field_from_json(nlohmann::json::array()), ConfigError);
}
