#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "switchdiff/path.hpp"

using namespace switchdiff;
using testing_support::at_bound;
using testing_support::StubRng;

namespace {

struct Moments {
    double mean = 0, var = 0;
    std::size_t n = 0;
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    m.n = xs.size();
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(m.n);
    for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(m.n - 1);
    return m;
}

}  // namespace

TEST(ExactSampler, ZeroNoiseSingleLimb) {
    StubRng rng;
    const auto m = at_bound(1, 1, 1, 1, Regime::plus, 3.0);
    const Skeleton sk{0.0, {0.7, 1.9}, Regime::plus};
    const auto tr = simulate_exact_constant(m, sk, 0.7, rng);
    EXPECT_EQ(tr.times.front(), 0.0);
    EXPECT_EQ(tr.values.front(), 3.0);
    EXPECT_NEAR(tr.values.back(), 3.7, 1e-12);
}

TEST(ExactSampler, ZeroNoiseAcrossSwitch) {
    StubRng rng;
    const auto m = at_bound(1, 1, 1, 1, Regime::plus, 2.0);
    const Skeleton sk{0.0, {0.5, 1.0}, Regime::plus};
    const auto tr = simulate_exact_constant(m, sk, 1.0, rng);
    ASSERT_EQ(tr.times, (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_NEAR(tr.values[1], 2.5, 1e-12);
    EXPECT_NEAR(tr.values[2], 2.0, 1e-12);
    EXPECT_EQ(tr.regimes, (std::vector<Regime>{Regime::plus, Regime::minus, Regime::plus}));
}

TEST(ExactSampler, MinusStartHoldsUntilT0) {
    StubRng rng;
    const auto m = at_bound(1, 1, 1, 1, Regime::minus);
    const Skeleton sk{0.4, {1.0, 2.0}, Regime::minus};
    const auto tr = simulate_exact_constant(m, sk, 1.5, rng);
    ASSERT_EQ(tr.times, (std::vector<double>{0.0, 0.4, 1.0, 1.5}));
    EXPECT_NEAR(tr.values.back(), -0.4 + 0.6 - 0.5, 1e-12);
}

TEST(ExactSampler, RejectsNonConstant) {
    auto s = testing_support::constant_spec(1, 1, 1, -1);
    s.drift_plus = TanhDrift{1.5, 0.5, 1.0};
    s.sup_b_plus = 2.0;
    const auto m = validate(s);
    StubRng rng;
    EXPECT_THROW(simulate_exact_constant(m, Skeleton{0.0, {1.0, 2.0}, Regime::plus}, 1.0, rng), NonConstantDrift);
}

TEST(ExactSampler, GaussianMoments) {
    const auto m = at_bound(1, 1, 1, 1);
    const Skeleton sk{0.0, {5.0, 6.0}, Regime::plus};  // plus on [0, 5)
    const double tau = 2.5;
    std::vector<double> xs(100000);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Stream rng(31, i);
        xs[i] = exact_constant_endpoint(m, sk, tau, rng);
    }
    const auto mo = moments(xs);
    EXPECT_LT(std::abs(mo.mean - tau), 4 * std::sqrt(mo.var / mo.n));
    EXPECT_LT(std::abs(mo.var / tau - 1), 0.05);
}

TEST(EulerMaruyama, ZeroNoiseConstantDrift) {
    StubRng rng;
    const auto m = at_bound(1, 1, 1, 1, Regime::plus, 0.25);
    const Skeleton sk{0.0, {5.0, 6.0}, Regime::plus};
    const auto tr = simulate_em(m, sk, 0.01, 1.0, rng);
    EXPECT_NEAR(tr.values.back(), 1.25, 1e-12);
    EXPECT_EQ(tr.times.size(), 101u);
}

TEST(EulerMaruyama, SplitsAtSwitch) {
    StubRng rng;
    const auto m = at_bound(1, 1, 1, 1, Regime::plus, 1.0);
    const Skeleton sk{0.0, {0.005, 5.0}, Regime::plus};
    const auto tr = simulate_em(m, sk, 0.01, 0.01, rng);
    ASSERT_EQ(tr.times.size(), 3u);
    EXPECT_EQ(tr.times[1], 0.005);
    EXPECT_NEAR(tr.values.back(), 1.0, 1e-12);
}

TEST(EulerMaruyama, NonPositiveStep) {
    StubRng rng;
    const auto m = at_bound(1, 1, 1, 1);
    const Skeleton sk{0.0, {1.0, 2.0}, Regime::plus};
    EXPECT_THROW(simulate_em(m, sk, 0.0, 1.0, rng), DomainError);
    EXPECT_THROW(simulate_em(m, sk, -0.1, 1.0, rng), DomainError);
}

TEST(EulerMaruyama, NonFiniteDrift) {
    auto s = testing_support::constant_spec(1, 1, 1, -1);
    s.drift_plus = CustomDrift{[](double x) { return x > 0.5 ? std::nan("") : 1.0; }, 1.0, "blowup"};
    const auto m = validate(s, {0, 0.0});
    StubRng rng;
    EXPECT_THROW(simulate_em(m, Skeleton{0.0, {5.0, 6.0}, Regime::plus}, 0.1, 2.0, rng), SimulationError);
}

TEST(EulerMaruyama, EverySwitchOnceAndContinuous) {
    const auto m = at_bound(3, 3, 1, 1);
    Stream rng(8, 0);
    const auto sk = sample_skeleton_until(m, 10.0, rng);
    const auto tr = simulate_em(m, sk, 0.037, 10.0, rng);
    EXPECT_TRUE(std::is_sorted(tr.times.begin(), tr.times.end()));
    EXPECT_EQ(std::adjacent_find(tr.times.begin(), tr.times.end()), tr.times.end());
    for (double t : sk.switch_times) {
        if (t >= 10.0) break;
        EXPECT_EQ(std::count(tr.times.begin(), tr.times.end(), t), 1);
    }
    EXPECT_EQ(tr.times.back(), 10.0);
    EXPECT_EQ(tr.times.size(), tr.values.size());
}

TEST(EulerMaruyama, Deterministic) {
    const auto m = at_bound(1, 2, 1, 1);
    Stream a(5, 5), b(5, 5);
    const auto ska = sample_skeleton_until(m, 20.0, a);
    const auto skb = sample_skeleton_until(m, 20.0, b);
    EXPECT_EQ(simulate_em(m, ska, 0.01, 20.0, a), simulate_em(m, skb, 0.01, 20.0, b));
}

TEST(EulerMaruyama, AgreesWithExactSampler) {
    const auto m = at_bound(1, 2, 1, 1);
    const std::size_t n = 10000;
    const double horizon = 2.0;
    std::vector<double> ex(n), em(n);
    for (std::size_t i = 0; i < n; ++i) {
        Stream r1(100, i);
        const auto sk = sample_skeleton_until(m, horizon, r1);
        ex[i] = exact_constant_endpoint(m, sk, horizon, r1);
        Stream r2(200, i);
        const auto sk2 = sample_skeleton_until(m, horizon, r2);
        em[i] = em_endpoint(m, sk2, 1e-3, horizon, r2);
    }
    const auto a = moments(ex), b = moments(em);
    EXPECT_LT(std::abs(a.mean - b.mean), 4 * std::sqrt(a.var / n + b.var / n));
    EXPECT_LT(std::abs(a.var / b.var - 1), 0.05);
}

TEST(EulerMaruyama, CoupledFinestLevelMatchesPlainEm) {
    auto s = testing_support::constant_spec(1, 1, 1, -1);
    s.drift_plus = TanhDrift{2.0, 1.0, 1.0};
    s.sup_b_plus = 3.0;
    const auto m = validate(s);
    Stream r1(3, 3), r2(3, 3);
    const auto sk1 = sample_skeleton_until(m, 3.0, r1);
    const auto sk2 = sample_skeleton_until(m, 3.0, r2);
    const auto fine = simulate_em(m, sk1, 0.01, 3.0, r1);
    const auto coupled = simulate_em_coupled(m, sk2, 0.01, {1, 4}, 3.0, r2);
    ASSERT_EQ(coupled.size(), 2u);
    EXPECT_EQ(coupled[0].times, fine.times);
    for (std::size_t i = 0; i < fine.values.size(); ++i) EXPECT_NEAR(coupled[0].values[i], fine.values[i], 1e-12);
    EXPECT_EQ(coupled[1].values.size() < coupled[0].values.size(), true);
    EXPECT_THROW(simulate_em_coupled(m, sk2, 0.01, {0}, 3.0, r2), DomainError);
}

// Additive noise: EM has strong order 1, so doubling the step should roughly double
// the error against a much finer coupled reference.
TEST(EulerMaruyama, StrongOrder) {
    auto s = testing_support::constant_spec(1, 1, 1, -1);
    s.drift_plus = TanhDrift{2.0, 1.0, 1.0};
    s.drift_minus = TanhDrift{-0.5, 0.5, 0.5};
    s.sup_b_plus = 3.0;
    const auto m = validate(s);
    const double horizon = 1.0, dt_fine = 1.0 / 1024;
    const std::size_t n = 2000;
    double e8 = 0, e16 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng(77, i);
        const auto sk = sample_skeleton_until(m, horizon, rng);
        const auto lv = simulate_em_coupled(m, sk, dt_fine, {1, 8, 16}, horizon, rng);
        e8 += std::abs(lv[1].values.back() - lv[0].values.back());
        e16 += std::abs(lv[2].values.back() - lv[0].values.back());
    }
    const double ratio = e16 / e8;
    EXPECT_GE(ratio, 1.2);
    EXPECT_LE(ratio, 2.8);
}

TEST(Statistic, Examples) {
    Trajectory tr;
    tr.times = {0.0, 5.0, 10.0};
    tr.values = {1.0, -2.0, 4.0};
    tr.regimes = {Regime::plus, Regime::minus, Regime::plus};
    tr.skeleton = Skeleton{0.0, {5.0, 10.0}, Regime::plus};
    EXPECT_DOUBLE_EQ(statistic_at(tr, PathStatistic::velocity_at_horizon), 0.3);
    EXPECT_DOUBLE_EQ(statistic_at(tr, PathStatistic::min_over_path), -2.0);
    EXPECT_DOUBLE_EQ(statistic_at(tr, PathStatistic::skeleton_velocity), 3.0);

    Trajectory single;
    single.times = {0.0};
    single.values = {2.5};
    single.regimes = {Regime::plus};
    EXPECT_DOUBLE_EQ(statistic_at(single, PathStatistic::min_over_path), 2.5);
    EXPECT_THROW(path_statistic_from_string("max_over_path"), DomainError);
    EXPECT_EQ(path_statistic_from_string("skeleton_velocity"), PathStatistic::skeleton_velocity);
}

TEST(Statistic, SkeletonVelocityZeroNoise) {
    // T_2n after n stubbed cycles is n (ln2/lp + ln2/lm); X gains r+ ln2/lp - r- ln2/lm per cycle
    StubRng rng;
    const double lp = 1.0, lm = 2.0, rp = 1.0, rm = 1.0;
    const auto m = at_bound(lp, lm, rp, rm);
    const auto sk = sample_skeleton(m, 4, rng);
    const auto tr = simulate_exact_constant(m, sk, sk.end_time(), rng);
    const double expected = std::log(2.0) * (rp / lp - rm / lm);
    EXPECT_NEAR(statistic_at(tr, PathStatistic::skeleton_velocity), expected, 1e-12);
}

TEST(TrajectoryCsv, Layout) {
    StubRng rng;
    const auto m = at_bound(1, 1, 1, 1);
    const auto tr = simulate_exact_constant(m, Skeleton{0.0, {0.5, 1.0}, Regime::plus}, 1.0, rng);
    std::ostringstream os;
    write_trajectory_csv(os, tr);
    EXPECT_EQ(os.str(), "time,x,regime\n0,0,plus\n0.5,0.5,minus\n1,0,plus\n");
}
