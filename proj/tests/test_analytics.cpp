#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "switchdiff/analytics.hpp"

using namespace switchdiff;

TEST(MgfDeficit, Examples) {
    EXPECT_EQ(mgf_deficit(0.0, 7, 2.0, 1.0, 1.0), 1.0);
    EXPECT_NEAR(mgf_deficit(0.1, 1, 2.0, 1.0, 1.0), 0.917657, 1e-6);
    EXPECT_NEAR(mgf_deficit(0.1, 1, 2.0, 1.0, 1.0), 0.9176579700677459, 1e-14);
    EXPECT_NEAR(mgf_deficit(0.1, 0, 2.0, 1.0, 1.0), 1.0 / 1.1, 1e-15);
    EXPECT_NEAR(mgf_deficit(0.1, 0, 2.0, 1.0, 1.0, false), 1.0, 1e-15);
    EXPECT_THROW(mgf_deficit(-0.1, 1, 2.0, 1.0, 1.0), DomainError);
}

TEST(MgfExcess, Examples) {
    EXPECT_EQ(mgf_excess(0.0, 3, 5.0 / 6.0, 2.0, 3.0), 1.0);
    // direct evaluation: 3/2.5 * (6/(1.5*2.5) e^{-5/12})^2
    const double direct = 3.0 / 2.5 * std::pow(6.0 / 3.75 * std::exp(-5.0 / 12.0), 2);
    EXPECT_NEAR(direct, 1.335085696533744, 1e-14);
    EXPECT_NEAR(mgf_excess(0.5, 2, 5.0 / 6.0, 2.0, 3.0), direct, 1e-13);
    EXPECT_THROW(mgf_excess(2.0, 1, 5.0 / 6.0, 2.0, 3.0), DomainError);
    EXPECT_THROW(mgf_excess(2.5, 1, 5.0 / 6.0, 2.0, 3.0), DomainError);
}

TEST(Mgf, UnityAtZero) {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> d(0.1, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double lp = d(gen), lm = d(gen);
        const auto n = static_cast<std::size_t>(i);
        EXPECT_EQ(mgf_deficit(0.0, n, 1 / lp + 1 / lm, lp, lm), 1.0);
        EXPECT_EQ(mgf_excess(0.0, n, 1 / lp + 1 / lm, lp, lm), 1.0);
        EXPECT_EQ(mgf_deficit(0.0, n, 1 / lp + 1 / lm, lp, lm, false), 1.0);
    }
}

TEST(Mgf, QuadratureOracle) {
    struct Case {
        double lp, lm;
    };
    for (const auto c : {Case{1.0, 1.0}, Case{2.0, 3.0}, Case{0.7, 1.9}}) {
        const double big = 1 / c.lp + 1 / c.lm;
        const double pole = std::min(c.lp, c.lm);
        for (std::size_t n = 1; n <= 5; ++n) {
            for (int k = 1; k <= 10; ++k) {
                const double lam = 0.05 * k;
                for (const bool minus : {true, false}) {
                    const double oracle =
                        std::exp(lam * big * n) * testing_support::gamma_convolution_mgf(-lam, n, c.lp, c.lm, minus);
                    const double got = mgf_deficit(lam, n, big, c.lp, c.lm, minus);
                    EXPECT_LT(std::abs(got / oracle - 1), 1e-6) << "deficit " << c.lp << ' ' << c.lm << ' ' << n << ' ' << lam;

                    const double lx = pole * k / 11.0;
                    const double oracle_x =
                        std::exp(-lx * big * n) * testing_support::gamma_convolution_mgf(lx, n, c.lp, c.lm, minus);
                    const double got_x = mgf_excess(lx, n, big, c.lp, c.lm, minus);
                    EXPECT_LT(std::abs(got_x / oracle_x - 1), 1e-6) << "excess " << c.lp << ' ' << c.lm << ' ' << n << ' ' << lx;
                }
            }
        }
    }
}

TEST(Mgf, LogSpaceNoOverflow) {
    const std::size_t n = 1000000;
    const auto d = mgf_deficit_log(25.0, n, 2.0, 1.0, 1.0);  // lambda * Lambda = 50
    EXPECT_TRUE(std::isfinite(d.log_magnitude));
    const double per_cycle = std::log(1.0 / (26.0 * 26.0)) + 50.0;
    EXPECT_NEAR(d.log_magnitude, std::log(1 / 26.0) + n * per_cycle, 1e-6 * std::abs(n * per_cycle));
    EXPECT_EQ(d.sign, 1);
    EXPECT_TRUE(std::isinf(d.value()));

    const auto e = mgf_excess_log(0.999, n, 2.0, 1.0, 1.0);
    EXPECT_TRUE(std::isfinite(e.log_magnitude));
    EXPECT_GT(e.log_magnitude, 0.0);
}

TEST(Chernoff, LowerTailReference) {
    const auto r = chernoff_skeleton(TailDirection::lower_tail, 0.5, 1, 1.0, 1.0);
    EXPECT_NEAR(r.lambda_star, 1.0 / 3.0, 1e-8);
    EXPECT_NEAR(r.kappa, 0.927406, 1e-6);
    EXPECT_NEAR(r.kappa, std::exp(0.5) / (16.0 / 9.0), 1e-12);
    EXPECT_FALSE(r.boundary_hit);

    const auto grid = testing_support::grid_search_kappa(0.5, 1.0, 1.0, 3.0, 1e-6);
    EXPECT_NEAR(r.lambda_star, grid.lambda, 2e-6);
    EXPECT_NEAR(r.kappa, grid.value, 1e-5);
    EXPECT_LE(r.kappa, grid.value + 1e-15);
}

TEST(Chernoff, SmallEpsilon) {
    const auto r = chernoff_skeleton(TailDirection::lower_tail, 1e-4, 10, 1.0, 1.0);
    EXPECT_LT(r.lambda_star, 1e-3);
    EXPECT_GT(r.kappa, 1.0 - 1e-6);
    EXPECT_LT(r.kappa, 1.0);
}

TEST(Chernoff, ImpossibleEventHitsCap) {
    const auto r = chernoff_skeleton(TailDirection::lower_tail, 2.0, 1, 1.0, 1.0, 1e3);
    EXPECT_TRUE(r.boundary_hit);
    EXPECT_DOUBLE_EQ(r.lambda_star, 1e3);
    EXPECT_NEAR(r.kappa, 1.0 / (1001.0 * 1001.0), 1e-18);
}

TEST(Chernoff, UpperTailStaysBelowPole) {
    const auto r = chernoff_skeleton(TailDirection::upper_tail, 1.0, 5, 2.0, 3.0);
    EXPECT_GT(r.lambda_star, 0.0);
    EXPECT_LT(r.lambda_star, 2.0);
    EXPECT_LT(r.kappa, 1.0);
    EXPECT_LE(r.bound, 1.0);
}

TEST(Chernoff, BoundIsOptimalAtRandomLambdas) {
    std::mt19937_64 gen(99);
    struct Case {
        TailDirection dir;
        double eps, lp, lm, hi;
        std::size_t n;
    };
    const Case cases[] = {
        {TailDirection::lower_tail, 0.5, 1.0, 1.0, 1e3, 5},
        {TailDirection::lower_tail, 0.2, 2.0, 3.0, 1e3, 20},
        {TailDirection::upper_tail, 0.5, 1.0, 1.0, 1.0 * (1 - 1e-9), 10},
        {TailDirection::upper_tail, 0.3, 2.0, 3.0, 2.0 * (1 - 1e-9), 3},
    };
    for (const auto& c : cases) {
        const auto r = chernoff_skeleton(c.dir, c.eps, c.n, c.lp, c.lm);
        const double log_bound = std::log(r.bound);
        EXPECT_LE(log_bound,
                  chernoff_log_objective(c.dir, r.bound_lambda, c.eps, c.n, c.lp, c.lm) + 1e-12);
        std::uniform_real_distribution<double> d(0.0, std::min(c.hi, 20.0));
        for (int i = 0; i < 64; ++i) {
            const double l = d(gen);
            if (l == 0.0) continue;
            EXPECT_LE(log_bound, std::min(0.0, chernoff_log_objective(c.dir, l, c.eps, c.n, c.lp, c.lm)) + 1e-9);
        }
        EXPECT_LE(r.kappa, 1.0);
    }
}

TEST(Chernoff, KappaBelowOneForAnyEpsilon) {
    for (double eps : {1e-3, 0.01, 0.1, 0.5, 1.0, 1.9}) {
        for (auto [lp, lm] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}, std::pair{0.3, 5.0}}) {
            const auto r = chernoff_skeleton(TailDirection::lower_tail, eps * (1 / lp + 1 / lm) / 2, 1, lp, lm);
            EXPECT_LT(r.kappa, 1.0) << eps << ' ' << lp << ' ' << lm;
        }
    }
}

TEST(Chernoff, RejectsBadInput) {
    EXPECT_THROW(chernoff_skeleton(TailDirection::lower_tail, 0.0, 1, 1.0, 1.0), DomainError);
    EXPECT_THROW(chernoff_skeleton(TailDirection::lower_tail, 0.5, 0, 1.0, 1.0), DomainError);
    EXPECT_THROW(chernoff_skeleton(TailDirection::lower_tail, 0.5, 1, 0.0, 1.0), DomainError);
}

TEST(MinimizeScalar, Parabola) {
    const auto [x, fx] = minimize_scalar([](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 2.0);
    EXPECT_NEAR(x, 0.3, 1e-9);
    EXPECT_LT(fx, 1e-18);
    // with an offset the minimum is only resolvable to about sqrt(machine epsilon)
    const auto [y, fy] = minimize_scalar([](double x) { return (x - 0.3) * (x - 0.3) + 1.0; }, 0.0, 2.0);
    EXPECT_NEAR(y, 0.3, 1e-7);
    EXPECT_EQ(fy, 1.0);
    const auto [edge, fe] = minimize_scalar([](double x) { return -x; }, 0.0, 2.0);
    EXPECT_EQ(edge, 2.0);
    EXPECT_EQ(fe, -2.0);
}

TEST(Lemma2Bound, Examples) {
    // a_2 = 0.8 for r+ = 1, r- = 0.2, lp = lm = 1, a_hat = 0
    EXPECT_EQ(lemma2_bound(0.0, 0.0, 10, 1.0, 0.2, 1.0, 1.0), 1.0);
    EXPECT_NEAR(lemma2_bound(0.1, 0.0, 10, 1.0, 0.2, 1.0, 1.0), std::pow(0.92, 10), 1e-14);
    EXPECT_NEAR(lemma2_bound(0.1, 0.0, 10, 1.0, 0.2, 1.0, 1.0), 0.434388, 1e-6);
    EXPECT_NEAR(lemma2_bound(0.05, 0.0, 20, 1.0, 0.2, 1.0, 1.0), 0.4420024338794074, 1e-14);
    EXPECT_THROW(lemma2_bound(2.0, 0.0, 10, 1.0, 0.2, 1.0, 1.0), DomainError);
    EXPECT_THROW(lemma2_bound(1.25, 0.0, 10, 1.0, 0.2, 1.0, 1.0), DomainError);
    // a_hat beyond the window makes a_2 <= 0
    EXPECT_THROW(lemma2_bound(0.1, 1.0, 10, 1.0, 0.2, 1.0, 1.0), DomainError);
}

TEST(Lemma2Bound, ModelOverload) {
    const auto m = testing_support::at_bound(1.0, 1.0, 1.0, 0.2);
    EXPECT_EQ(lemma2_bound(0.05, 0.0, 20, m), lemma2_bound(0.05, 0.0, 20, 1.0, 0.2, 1.0, 1.0));
}

TEST(DecayFit, Examples) {
    const auto line = decay_rate_fit({{10, -2}, {20, -4}, {40, -8}, {80, -16}});
    EXPECT_NEAR(line.slope, -0.2, 1e-14);
    EXPECT_NEAR(line.intercept, 0.0, 1e-12);
    EXPECT_NEAR(line.residual, 0.0, 1e-20);

    EXPECT_NEAR(decay_rate_fit({{1, -1}, {2, -2}, {3, -3}}).slope, -1.0, 1e-14);
    EXPECT_THROW(decay_rate_fit({{1, -1}}), DegenerateInput);
    EXPECT_THROW(decay_rate_fit({{2, -1}, {2, -2}, {2, -3}}), DegenerateInput);
    EXPECT_THROW(decay_rate_fit({{1, -1}, {2, -std::numeric_limits<double>::infinity()}, {3, -3}}), DegenerateInput);
}

TEST(DecayFit, ResidualAndVariation) {
    const auto f = decay_rate_fit({{0, 0}, {1, -1}, {2, -1}, {3, -3}});
    EXPECT_GT(f.residual, 0.0);
    EXPECT_NEAR(f.total_variation, 4.75, 1e-14);
    EXPECT_LT(f.residual, f.total_variation);
}

TEST(TailDirection, Names) {
    EXPECT_EQ(tail_direction_from_string("upper_tail"), TailDirection::upper_tail);
    EXPECT_STREQ(to_string(TailDirection::lower_tail), "lower_tail");
}
