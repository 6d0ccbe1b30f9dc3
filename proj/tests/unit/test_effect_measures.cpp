#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../oracles.hpp"
#include "hazardlens/effect_measures.hpp"
#include "hazardlens/error.hpp"
#include "hazardlens/numerics.hpp"

namespace hazardlens {
namespace {

const double kLn2 = std::numbers::ln2;

TEST(Arr, Examples) {
    EXPECT_NEAR(arr(ExponentialHazard(0.1), HazardRatio(0.6), 1.0), std::exp(-0.06) - std::exp(-0.1), 1e-16);
    EXPECT_NEAR(arr(ExponentialHazard(0.1), HazardRatio(0.6), 1.0), 0.036928, 1e-6);
    EXPECT_NEAR(arr(ExponentialHazard(0.6), HazardRatio(0.6), 1.0), 0.148864, 1e-6);
    EXPECT_EQ(arr(WeibullHazard(2.0, 3.0), HazardRatio(1.0), 4.2), 0.0);
    EXPECT_EQ(arr(ExponentialHazard(0.1), HazardRatio(0.6), 0.0), 0.0);
}

TEST(Arr, SignFollowsHazardRatio) {
    const HazardModel m(PolynomialHazard({0.2, 0.05}));
    EXPECT_GT(arr(m, HazardRatio(0.7), 2.0), 0.0);
    EXPECT_LT(arr(m, HazardRatio(1.3), 2.0), 0.0);
}

TEST(ArrSensitivities, ClosedFormsAndFiniteDifferences) {
    const auto s = arr_sensitivities(ExponentialHazard(0.1), HazardRatio(0.6), 1.0);
    EXPECT_NEAR(s.d_lambda, -0.0941765, 1e-6);
    EXPECT_NEAR(s.d_gamma, 0.339778, 1e-6);
    const double h = 1e-6;
    const double fd_lambda = oracle::central_difference(
        [](double l) { return std::exp(-l * 0.1) - std::exp(-0.1); }, 0.6, h);
    const double fd_gamma = oracle::central_difference(
        [](double g) { return std::exp(-0.6 * g) - std::exp(-g); }, 0.1, h);
    EXPECT_NEAR(s.d_lambda, fd_lambda, 1e-8);
    EXPECT_NEAR(s.d_gamma, fd_gamma, 1e-8);
}

TEST(ArrSensitivities, VanishesAtCriticalRate) {
    const HazardRatio hr(0.6);
    const double g_crit = critical_points(0.1, hr, 1.0).gamma_crit;
    EXPECT_NEAR(g_crit, 1.277065, 1e-6);
    EXPECT_NEAR(arr_sensitivities(ExponentialHazard(g_crit), hr, 1.0).d_gamma, 0.0, 1e-9);
    EXPECT_EQ(arr_sensitivities(ExponentialHazard(0.1), HazardRatio(1.0), 1.0).d_gamma, 0.0);
}

TEST(ArrSensitivities, RejectsOtherFamilies) {
    EXPECT_THROW(arr_sensitivities(WeibullHazard(1.0, 2.0), HazardRatio(0.6), 1.0), UnsupportedModelError);
    EXPECT_THROW(arr_sensitivities(PolynomialHazard({0.1}), HazardRatio(0.6), 1.0), UnsupportedModelError);
}

TEST(Nnt, TrialsAAndB) {
    const Nnt a = nnt(ExponentialHazard(0.1), HazardRatio(0.6), 1.0);
    EXPECT_NEAR(a.raw, 27.08, 0.01);
    ASSERT_TRUE(a.display.has_value());
    EXPECT_EQ(*a.display, 27);
    const Nnt b = nnt(ExponentialHazard(0.6), HazardRatio(0.6), 1.0);
    EXPECT_NEAR(b.raw, 6.72, 0.01);
    ASSERT_TRUE(b.display.has_value());
    EXPECT_EQ(*b.display, 7);
}

TEST(Nnt, NoEffectIsASignalNotAnException) {
    const Nnt same = nnt(ExponentialHazard(0.1), HazardRatio(1.0), 1.0);
    EXPECT_TRUE(same.no_effect());
    EXPECT_TRUE(std::isinf(same.raw));
    EXPECT_TRUE(nnt(ExponentialHazard(0.1), HazardRatio(0.6), 0.0).no_effect());
    EXPECT_TRUE(nnt(ExponentialHazard(0.1), HazardRatio(1.4), 1.0).no_effect());
    EXPECT_THROW(nnt(ExponentialHazard(0.1), HazardRatio(0.6), -1.0), DomainError);
}

TEST(MedianDifference, Examples) {
    EXPECT_NEAR(median_difference(ExponentialHazard(0.1), HazardRatio(0.6)), kLn2 * (1 / 0.06 - 1 / 0.1), 1e-12);
    EXPECT_NEAR(median_difference(ExponentialHazard(0.1), HazardRatio(0.6)), 4.62098, 1e-4);
    EXPECT_NEAR(median_difference(ExponentialHazard(0.6), HazardRatio(0.6)), 0.770163, 1e-4);
    EXPECT_NEAR(median_difference(ExponentialHazard(0.6), HazardRatio(0.6)) * 12.0, 9.24, 0.01);
    EXPECT_EQ(median_difference(PolynomialHazard({0.1, 0.01}), HazardRatio(1.0)), 0.0);
    EXPECT_LT(median_difference(WeibullHazard(1.0, 2.0), HazardRatio(1.5)), 0.0);
}

TEST(MdDecomposition, Polynomial) {
    const auto d = md_decomposition(PolynomialHazard({0.1, 0.01}), HazardRatio(0.6));
    // Quadratic-formula medians (mpmath): 4.71157650, 6.85430429; average 0.21565881.
    EXPECT_NEAR(d.t_median_control, oracle::quadratic_root(0.1, 0.01, kLn2), 1e-10);
    EXPECT_NEAR(d.t_median_experimental, oracle::quadratic_root(0.1, 0.01, kLn2 / 0.6), 1e-10);
    EXPECT_NEAR(d.t_median_control, 4.7116, 1e-3);
    EXPECT_NEAR(d.t_median_experimental, 6.8543, 1e-3);
    EXPECT_NEAR(d.delta_avg_hazard, 0.21566, 1e-3);
    EXPECT_NEAR(d.md_direct, 2.1427, 1e-3);
    EXPECT_NEAR(d.md_identity, d.md_direct, 1e-6 * d.md_direct);
}

TEST(MdDecomposition, ExponentialReducesToClosedForm) {
    const auto d = md_decomposition(ExponentialHazard(0.1), HazardRatio(0.6));
    EXPECT_NEAR(d.delta_avg_hazard, 0.1, 1e-14);
    EXPECT_NEAR(d.md_identity, 0.4 * kLn2 / (0.6 * 0.1), 1e-12);
    EXPECT_NEAR(d.md_identity, 4.62098, 1e-4);
}

TEST(MdDecomposition, Weibull) {
    const auto d = md_decomposition(WeibullHazard(1.0, 2.0), HazardRatio(0.6));
    EXPECT_NEAR(d.t_median_control, std::sqrt(kLn2), 1e-12);
    EXPECT_NEAR(d.t_median_experimental, std::sqrt(kLn2 / 0.6), 1e-12);
    EXPECT_NEAR(d.t_median_control, 0.832555, 1e-4);
    EXPECT_NEAR(d.t_median_experimental, 1.074823, 1e-4);
    EXPECT_NEAR(d.delta_avg_hazard, 1.90738, 1e-4);
    EXPECT_NEAR(d.md_direct, 0.242268, 1e-4);
}

TEST(MdDecomposition, RequiresProtectiveTreatment) {
    EXPECT_THROW(md_decomposition(ExponentialHazard(0.1), HazardRatio(1.0)), DomainError);
    EXPECT_THROW(md_decomposition(ExponentialHazard(0.1), HazardRatio(2.0)), DomainError);
}

TEST(MdDecomposition, IdentityAcrossFamilies) {
    const std::vector<HazardModel> models = {ExponentialHazard(0.3), WeibullHazard(2.0, 0.5),
                                             WeibullHazard(2.0, 2.0), WeibullHazard(2.0, 3.0),
                                             PolynomialHazard({0.1, 0.01}),
                                             PolynomialHazard({0.05, 0.0, 0.004})};
    for (const auto& m : models) {
        for (double l : {0.1, 0.3, 0.6, 0.9, 0.99}) {
            const auto d = md_decomposition(m, HazardRatio(l));
            EXPECT_NEAR(d.md_identity, d.md_direct, 1e-6 * std::max(1.0, d.md_direct)) << m.describe();
            EXPECT_NEAR(m.cumulative_hazard(d.t_median_control), kLn2, 1e-8);
            EXPECT_NEAR(l * m.cumulative_hazard(d.t_median_experimental), kLn2, 1e-8);
        }
    }
}

TEST(CriticalPoints, Examples) {
    const auto a = critical_points(0.1, HazardRatio(0.6), 1.0);
    EXPECT_NEAR(a.t_star, 12.7707, 1e-4);
    EXPECT_NEAR(a.gamma_crit, 1.27707, 1e-4);
    EXPECT_FALSE(a.limit);
    const auto b = critical_points(0.6, HazardRatio(0.6), 1.0);
    EXPECT_NEAR(b.t_star, 2.12844, 1e-4);
    EXPECT_NEAR(a.arr_at_tstar, b.arr_at_tstar, 1e-12);
    // arr at t* evaluated directly for each baseline rate.
    EXPECT_NEAR(arr(ExponentialHazard(0.1), HazardRatio(0.6), a.t_star), a.arr_at_tstar, 1e-14);
    EXPECT_NEAR(arr(ExponentialHazard(0.6), HazardRatio(0.6), b.t_star), a.arr_at_tstar, 1e-14);
    EXPECT_NEAR(a.nnt_at_tstar, 5.379, 1e-3);
}

TEST(CriticalPoints, UnitHazardRatioLimit) {
    const auto p = critical_points(0.25, HazardRatio(1.0), 3.0);
    EXPECT_TRUE(p.limit);
    EXPECT_DOUBLE_EQ(p.t_star, 4.0);
    EXPECT_DOUBLE_EQ(p.gamma_crit, 1.0 / 3.0);
    EXPECT_TRUE(std::isinf(p.nnt_at_tstar));
    // Continuity of c(lambda) through lambda = 1.
    EXPECT_NEAR(critical_constant(1.0 - 1e-9), 1.0, 1e-9);
    EXPECT_NEAR(critical_constant(1.0 + 1e-9), 1.0, 1e-9);
}

TEST(CriticalPoints, SharedDimensionlessConstant) {
    for (double l : {0.2, 0.5, 0.8, 1.7}) {
        for (double g : {0.05, 0.4, 2.0}) {
            for (double t : {0.5, 1.0, 5.0}) {
                const auto p = critical_points(g, HazardRatio(l), t);
                const double c = std::log(l) / (l - 1.0);
                EXPECT_NEAR(p.gamma_crit * t, c, 1e-14);
                EXPECT_NEAR(p.t_star * g, c, 1e-14);
            }
        }
    }
}

TEST(CriticalPoints, RejectsBadInputs) {
    EXPECT_THROW(critical_points(0.0, HazardRatio(0.6), 1.0), DomainError);
    EXPECT_THROW(critical_points(0.1, HazardRatio(0.6), 0.0), DomainError);
}

TEST(MeanSurvivalTime, Examples) {
    EXPECT_NEAR(mean_survival_time(ExponentialHazard(0.1), HazardRatio(0.6)), 16.6667, 1e-4);
    EXPECT_DOUBLE_EQ(mean_survival_time(ExponentialHazard(0.1), HazardRatio(1.0)), 10.0);
    const double w = mean_survival_time(WeibullHazard(1.0, 2.0), HazardRatio(1.0));
    EXPECT_NEAR(w, std::sqrt(std::numbers::pi) / 2, 1e-12);
    EXPECT_NEAR(w, oracle::survival_area([](double t) { return std::exp(-t * t); }), 1e-9);
    EXPECT_NEAR(mst_ratio(WeibullHazard(1.0, 2.0), HazardRatio(0.6)), std::sqrt(0.6), 1e-12);
    EXPECT_NEAR(mst_ratio(WeibullHazard(1.0, 2.0), HazardRatio(0.6)), 0.774597, 1e-6);
}

TEST(MeanSurvivalTime, GammaFunctionAgainstQuadrature) {
    for (double k : {0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0, 5.0}) {
        for (double l : {0.3, 1.0}) {
            const WeibullHazard w(1.7, k);
            const double closed = mean_survival_time(w, HazardRatio(l));
            const double quad = mean_survival_time_quadrature(w, HazardRatio(l), 1e-12);
            EXPECT_NEAR(closed, quad, 1e-10 * closed) << "k=" << k;
        }
    }
}

TEST(MeanSurvivalTime, PolynomialByQuadrature) {
    const HazardModel m(PolynomialHazard({1.0, 0.01}));
    const double mst = mean_survival_time(m, HazardRatio(1.0));
    EXPECT_NEAR(mst, 0.981094307315388, 1e-8);
    EXPECT_NEAR(mst, oracle::survival_area([](double t) { return std::exp(-t - 0.01 * t * t); }), 1e-9);
}

TEST(MstRatio, ExponentialIsExactlyLambda) {
    for (double l : {0.1, 0.6, 0.9, 1.4}) {
        EXPECT_NEAR(mst_ratio(ExponentialHazard(0.37), HazardRatio(l)), l, 1e-15);
    }
}

TEST(MstRatio, WeibullDependsOnShapeNotScale) {
    for (double k : {0.5, 2.0, 3.0}) {
        for (double l : {0.3, 0.6, 0.9}) {
            const double r1 = mst_ratio(WeibullHazard(0.5, k), HazardRatio(l));
            for (double sigma : {1.0, 5.0}) {
                EXPECT_NEAR(mst_ratio(WeibullHazard(sigma, k), HazardRatio(l)), r1, 1e-10);
            }
            const WeibullHazard w(1.0, k);
            const double quad = mean_survival_time_quadrature(w, HazardRatio(1.0)) /
                                mean_survival_time_quadrature(w, HazardRatio(l));
            EXPECT_NEAR(quad, std::pow(l, 1.0 / k), 1e-6);
        }
    }
}

TEST(Icer, Examples) {
    const Icer a = icer(CostInputs(1.0, 10.0), 10.0, 16.6667);
    EXPECT_NEAR(a.exact, 23.5, 1e-3);
    EXPECT_NEAR(icer(CostInputs(1.0, 10.0), 10.0, 50.0 / 3.0).exact, (10.0 - 0.6) / 0.4, 1e-12);
    const Icer same = icer(CostInputs(3.5, 3.5), 4.0, 9.0);
    EXPECT_DOUBLE_EQ(same.exact, 3.5);
    const double m0 = mean_survival_time(ExponentialHazard(0.2), HazardRatio(1.0));
    const double me = mean_survival_time(ExponentialHazard(0.2), HazardRatio(0.6));
    const Icer free_control = icer(CostInputs(0.0, 10.0), m0, me);
    EXPECT_NEAR(free_control.exact, 25.0, 1e-12);
    EXPECT_NEAR(free_control.approx, 25.0, 1e-12);
}

TEST(Icer, Errors) {
    EXPECT_THROW(icer(CostInputs(1.0, 2.0), 5.0, 5.0), DomainError);
    EXPECT_THROW(CostInputs(0.0, 0.0), DomainError);
    EXPECT_THROW(CostInputs(-1.0, 2.0), DomainError);
}

TEST(Icer, IgnoringControlCostOverstatesIcer) {
    // approx - exact = c0 MST_0 / (MST_E - MST_0) > 0 when MST_E > MST_0.
    for (double c0 : {0.1, 1.0, 5.0}) {
        for (double ce : {1.0, 10.0, 100.0}) {
            for (double rho : {0.05, 0.3, 0.6, 0.95}) {
                const double m0 = rho * 10.0;
                const Icer r = icer(CostInputs(c0, ce), m0, 10.0);
                EXPECT_GT(r.approx, r.exact);
                const double gap = c0 * m0 / (10.0 - m0);
                EXPECT_NEAR(r.approx - r.exact, gap, 1e-12 * std::max(1.0, std::abs(r.approx)));
            }
        }
    }
}

// Monotonicity and shape properties of ARR.

TEST(ArrProperties, StrictlyDecreasingInHazardRatio) {
    const std::vector<HazardModel> models = {ExponentialHazard(0.1), WeibullHazard(2.0, 1.5),
                                             PolynomialHazard({0.1, 0.01})};
    for (const auto& m : models) {
        for (double t : {0.5, 1.0, 4.0}) {
            double previous = arr(m, HazardRatio(0.05), t);
            for (int i = 2; i <= 20; ++i) {
                const double current = arr(m, HazardRatio(0.05 * i), t);
                EXPECT_LT(current, previous) << m.describe();
                previous = current;
            }
        }
    }
    for (double g : {0.05, 0.5, 2.0}) {
        for (double l = 0.05; l < 1.0; l += 0.05) {
            EXPECT_LT(arr_sensitivities(ExponentialHazard(g), HazardRatio(l), 1.0).d_lambda, 0.0);
        }
    }
}

TEST(ArrProperties, UnimodalInBaselineRate) {
    for (double l : {0.3, 0.6, 0.9}) {
        for (double t : {1.0, 2.5}) {
            const HazardRatio hr(l);
            const double g_crit = critical_points(1.0, hr, t).gamma_crit;
            auto f = [&](double g) { return arr(ExponentialHazard(g), hr, t); };
            const double g_max = numerics::argmax_unimodal(f, 0.01, 10.0 / t, 1e-9);
            EXPECT_NEAR(g_max, g_crit, 1e-6);
            for (double g = 0.01; g + 0.01 < g_crit; g += 0.01) EXPECT_LT(f(g), f(g + 0.01));
            for (double g = g_crit; g < 10.0; g += 0.01) EXPECT_GT(f(g), f(g + 0.01));
        }
    }
}

TEST(ArrProperties, DecreasingInRateBeyondTStar) {
    const HazardRatio hr(0.6);
    for (double gamma0 : {0.1, 0.6}) {
        const double t_star = critical_points(gamma0, hr, 1.0).t_star;
        for (double t : {t_star, 1.5 * t_star, 3.0 * t_star}) {
            for (double g = gamma0; g < 2.0; g += 0.05) {
                EXPECT_GT(arr(ExponentialHazard(g), hr, t), arr(ExponentialHazard(g + 0.05), hr, t));
            }
        }
    }
}

TEST(ArrProperties, ScaleFreeInRateTimesTime) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.01, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double g = u(rng);
        const double g2 = u(rng);
        const double t = u(rng);
        const HazardRatio hr(u(rng) / 3.0);
        EXPECT_NEAR(arr(ExponentialHazard(g), hr, t), arr(ExponentialHazard(g2), hr, t * g / g2), 1e-12);
    }
}

TEST(EffectSummary, Consistency) {
    const HazardModel m(WeibullHazard(3.0, 1.3));
    const HazardRatio hr(0.7);
    const EffectSummary s = summarize(m, hr, 2.0);
    EXPECT_NEAR(s.arr, survival(m, hr, 2.0) - survival(m, HazardRatio(1.0), 2.0), 1e-15);
    EXPECT_DOUBLE_EQ(s.nnt.raw, 1.0 / s.arr);
    EXPECT_DOUBLE_EQ(s.mst_ratio, s.mst_control / s.mst_experimental);
    EXPECT_EQ(s.eval_time, 2.0);
}

}  // namespace
}  // namespace hazardlens
