#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "switchdiff/model.hpp"
#include "switchdiff/rng.hpp"

namespace switchdiff {

/// Switching times of the regime process.
///
/// t0 is the first entry into "plus" (0 when starting there, Exp(lambda_minus)
/// otherwise). switch_times holds T_1, T_2, ...; the regime flips at each of
/// them, starting from plus at t0. An even count means whole cycles.
struct Skeleton {
    double t0 = 0.0;
    std::vector<double> switch_times;
    Regime initial_regime = Regime::plus;

    std::size_t full_cycles() const { return switch_times.size() / 2; }
    /// Time of the last recorded switch (t0 when there are none).
    double end_time() const { return switch_times.empty() ? t0 : switch_times.back(); }
    /// T_{2k}; k = 0 gives t0.
    double cycle_end(std::size_t k) const { return k == 0 ? t0 : switch_times.at(2 * k - 1); }
    /// Regime in force on [T_k, T_{k+1}) where k indexes switch_times (after switch k+1).
    static Regime regime_after_switch(std::size_t switch_index) {
        // switch_index 0 is T_1: plus -> minus
        return switch_index % 2 == 0 ? Regime::minus : Regime::plus;
    }
    /// Regime at time t (right-continuous).
    Regime regime_at(double t) const;

    friend bool operator==(const Skeleton&, const Skeleton&) = default;
};

/// -ln(u)/rate. Requires rate > 0 and u in (0, 1].
double sample_holding_time(double rate, double u);

template <RandomSource R>
double draw_holding_time(double rate, R& rng) {
    return sample_holding_time(rate, rng.uniform());
}

namespace detail {
void require_cycles(std::size_t n_cycles);
}

/// n_cycles full cycles after T_0: alternating Exp(lambda_plus), Exp(lambda_minus) holding times.
template <RandomSource R>
Skeleton sample_skeleton(const ValidatedModel& model, std::size_t n_cycles, R& rng) {
    detail::require_cycles(n_cycles);
    const auto& s = model.spec();
    Skeleton sk;
    sk.initial_regime = s.z0;
    sk.t0 = s.z0 == Regime::plus ? 0.0 : draw_holding_time(s.lambda_minus, rng);
    sk.switch_times.reserve(2 * n_cycles);
    double t = sk.t0;
    for (std::size_t k = 0; k < n_cycles; ++k) {
        t += draw_holding_time(s.lambda_plus, rng);
        sk.switch_times.push_back(t);
        t += draw_holding_time(s.lambda_minus, rng);
        sk.switch_times.push_back(t);
    }
    return sk;
}

/// Whole cycles until T_{2n} >= horizon (at least one). Draw order matches sample_skeleton.
template <RandomSource R>
Skeleton sample_skeleton_until(const ValidatedModel& model, double horizon, R& rng) {
    const auto& s = model.spec();
    Skeleton sk;
    sk.initial_regime = s.z0;
    sk.t0 = s.z0 == Regime::plus ? 0.0 : draw_holding_time(s.lambda_minus, rng);
    const double mean_cycle = 1.0 / s.lambda_plus + 1.0 / s.lambda_minus;
    if (std::isfinite(horizon) && horizon > 0.0)
        sk.switch_times.reserve(2 * static_cast<std::size_t>(horizon / mean_cycle * 1.2 + 8.0));
    double t = sk.t0;
    do {
        t += draw_holding_time(s.lambda_plus, rng);
        sk.switch_times.push_back(t);
        t += draw_holding_time(s.lambda_minus, rng);
        sk.switch_times.push_back(t);
    } while (t < horizon);
    return sk;
}

/// T_{2n} / n over the skeleton's full cycles. Throws DomainError when there are none.
double cycle_statistic(const Skeleton& skeleton);

struct LlnResult {
    double statistic = 0.0;  // T_{2n}/n
    double mean_cycle = 0.0;
    double deviation = 0.0;  // |statistic - mean_cycle|
    double tolerance = 0.0;
    bool pass = false;
};

template <RandomSource R>
LlnResult lln_check(const ValidatedModel& model, std::size_t n, double tolerance, R& rng) {
    LlnResult r;
    r.statistic = cycle_statistic(sample_skeleton(model, n, rng));
    r.mean_cycle = 1.0 / model.spec().lambda_plus + 1.0 / model.spec().lambda_minus;
    r.deviation = std::abs(r.statistic - r.mean_cycle);
    r.tolerance = tolerance;
    r.pass = r.deviation < tolerance;
    return r;
}

/// CSV with header `index,time,regime_after`; row 0 is T_0.
void write_skeleton_csv(std::ostream& os, const Skeleton& skeleton);

}  // namespace switchdiff
