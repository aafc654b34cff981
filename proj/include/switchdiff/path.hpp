#pragma once

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "switchdiff/model.hpp"
#include "switchdiff/rng.hpp"
#include "switchdiff/skeleton.hpp"

namespace switchdiff {

/// Sampled path of X aligned with its skeleton. times[0] = 0, values[0] = x0,
/// and every switch time up to the horizon appears exactly once.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<Regime> regimes;  // regime in force from times[i] on
    Skeleton skeleton;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

enum class Integrator { exact, euler_maruyama };

const char* to_string(Integrator i);
Integrator integrator_from_string(const std::string& s);

struct SimConfig {
    Integrator integrator = Integrator::exact;
    double dt = 0.01;  // used by euler_maruyama only
};

namespace detail {

void require_horizon(const Skeleton& skeleton, double horizon);
void require_step(double dt);
[[noreturn]] void throw_non_finite(double t, double x);

/// Switch times within (0, horizon] followed by horizon itself (no duplicate).
std::vector<double> breakpoints(const Skeleton& skeleton, double horizon);

/// Drives one integration pass: calls step(t_from, t_to, regime) for each
/// sub-interval and record(t, regime_from_t) at each node, where nodes are
/// the breakpoints plus (when dt > 0) the multiples of dt in between.
/// A multiple of dt closer than 1e-9 dt to a breakpoint is absorbed into it.
template <class Step, class Record>
void walk(const Skeleton& skeleton, double horizon, double dt, Step&& step, Record&& record) {
    const auto stops = breakpoints(skeleton, horizon);
    double t = 0.0;
    Regime regime = skeleton.regime_at(0.0);
    record(t, regime);
    for (const double stop : stops) {
        if (dt > 0.0) {
            auto k = static_cast<long long>(std::floor(t / dt)) + 1;
            for (double g = static_cast<double>(k) * dt;; g = static_cast<double>(++k) * dt) {
                if (g <= t) continue;
                if (g >= stop - 1e-9 * dt) break;
                step(t, g, regime);
                t = g;
                record(t, regime);
            }
        }
        step(t, stop, regime);
        t = stop;
        regime = skeleton.regime_at(t);
        record(t, regime);
    }
}

inline double constant_value(const Drift& d) { return std::get<ConstantDrift>(d).value; }

}  // namespace detail

/// Exact Gaussian transitions for constant drifts:
/// X_t = X_s + b (t - s) + N(0, t - s) between consecutive event times.
/// Nodes are 0, every switch time up to the horizon, and the horizon.
template <RandomSource R>
Trajectory simulate_exact_constant(const ValidatedModel& model, const Skeleton& skeleton, double horizon, R& rng) {
    if (!model.constant_drifts())
        throw NonConstantDrift("simulate_exact_constant requires constant drifts in both regimes");
    detail::require_horizon(skeleton, horizon);
    const double bp = detail::constant_value(model.spec().drift_plus);
    const double bm = detail::constant_value(model.spec().drift_minus);
    Trajectory out;
    out.skeleton = skeleton;
    double x = model.spec().x0;
    detail::walk(
        skeleton, horizon, 0.0,
        [&](double s, double t, Regime r) {
            const double h = t - s;
            x += (r == Regime::plus ? bp : bm) * h + std::sqrt(h) * rng.normal();
        },
        [&](double t, Regime r) {
            out.times.push_back(t);
            out.values.push_back(x);
            out.regimes.push_back(r);
        });
    return out;
}

/// Same transitions as simulate_exact_constant, returning only X(horizon).
template <RandomSource R>
double exact_constant_endpoint(const ValidatedModel& model, const Skeleton& skeleton, double horizon, R& rng) {
    if (!model.constant_drifts())
        throw NonConstantDrift("exact_constant_endpoint requires constant drifts in both regimes");
    detail::require_horizon(skeleton, horizon);
    const double bp = detail::constant_value(model.spec().drift_plus);
    const double bm = detail::constant_value(model.spec().drift_minus);
    double x = model.spec().x0;
    detail::walk(
        skeleton, horizon, 0.0,
        [&](double s, double t, Regime r) {
            const double h = t - s;
            x += (r == Regime::plus ? bp : bm) * h + std::sqrt(h) * rng.normal();
        },
        [](double, Regime) {});
    return x;
}

/// Euler-Maruyama with steps split at every switch time, so the regime is
/// constant over each step: X += b_regime(X) h + N(0, h).
template <RandomSource R>
Trajectory simulate_em(const ValidatedModel& model, const Skeleton& skeleton, double dt, double horizon, R& rng) {
    detail::require_step(dt);
    detail::require_horizon(skeleton, horizon);
    Trajectory out;
    out.skeleton = skeleton;
    double x = model.spec().x0;
    detail::walk(
        skeleton, horizon, dt,
        [&](double s, double t, Regime r) {
            const double h = t - s;
            x += model.drift(r, x) * h + std::sqrt(h) * rng.normal();
            if (!std::isfinite(x)) detail::throw_non_finite(t, x);
        },
        [&](double t, Regime r) {
            out.times.push_back(t);
            out.values.push_back(x);
            out.regimes.push_back(r);
        });
    return out;
}

template <RandomSource R>
double em_endpoint(const ValidatedModel& model, const Skeleton& skeleton, double dt, double horizon, R& rng) {
    detail::require_step(dt);
    detail::require_horizon(skeleton, horizon);
    double x = model.spec().x0;
    detail::walk(
        skeleton, horizon, dt,
        [&](double s, double t, Regime r) {
            const double h = t - s;
            x += model.drift(r, x) * h + std::sqrt(h) * rng.normal();
            if (!std::isfinite(x)) detail::throw_non_finite(t, x);
        },
        [](double, Regime) {});
    return x;
}

template <RandomSource R>
double simulate_endpoint(const ValidatedModel& model, const Skeleton& skeleton, double horizon,
                         const SimConfig& sim, R& rng) {
    if (sim.integrator == Integrator::exact) return exact_constant_endpoint(model, skeleton, horizon, rng);
    return em_endpoint(model, skeleton, sim.dt, horizon, rng);
}

/// Coupled Euler-Maruyama: one Brownian path is drawn on the finest grid
/// (multiples of dt_fine plus switch times) and summed for each coarser level.
/// Level i keeps the switch times and the multiples of strides[i] * dt_fine.
template <RandomSource R>
std::vector<Trajectory> simulate_em_coupled(const ValidatedModel& model, const Skeleton& skeleton, double dt_fine,
                                            const std::vector<int>& strides, double horizon, R& rng) {
    detail::require_step(dt_fine);
    detail::require_horizon(skeleton, horizon);
    for (int s : strides)
        if (s < 1) throw DomainError("simulate_em_coupled: strides must be >= 1");

    struct Node {
        double t;
        double w;
        Regime regime;
        long long grid_index;  // -1 for breakpoints
    };
    std::vector<Node> nodes;
    double w = 0.0;
    detail::walk(
        skeleton, horizon, dt_fine,
        [&](double s, double t, Regime) { w += std::sqrt(t - s) * rng.normal(); },
        [&](double t, Regime r) {
            const auto k = static_cast<long long>(std::llround(t / dt_fine));
            const bool on_grid = static_cast<double>(k) * dt_fine == t;
            nodes.push_back({t, w, r, on_grid ? k : -1});
        });
    const auto stops = detail::breakpoints(skeleton, horizon);

    std::vector<Trajectory> out;
    out.reserve(strides.size());
    for (int stride : strides) {
        Trajectory tr;
        tr.skeleton = skeleton;
        double x = model.spec().x0;
        std::size_t prev = 0;
        tr.times.push_back(nodes[0].t);
        tr.values.push_back(x);
        tr.regimes.push_back(nodes[0].regime);
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            const auto& n = nodes[i];
            const bool is_stop = std::binary_search(stops.begin(), stops.end(), n.t);
            const bool keep = is_stop || (n.grid_index >= 0 && n.grid_index % stride == 0);
            if (!keep) continue;
            const auto& p = nodes[prev];
            const double h = n.t - p.t;
            x += model.drift(p.regime, x) * h + (n.w - p.w);
            if (!std::isfinite(x)) detail::throw_non_finite(n.t, x);
            tr.times.push_back(n.t);
            tr.values.push_back(x);
            tr.regimes.push_back(n.regime);
            prev = i;
        }
        out.push_back(std::move(tr));
    }
    return out;
}

enum class PathStatistic { velocity_at_horizon, skeleton_velocity, min_over_path };

const char* to_string(PathStatistic k);
/// Throws DomainError ("UnknownStatistic") for unrecognized names.
PathStatistic path_statistic_from_string(const std::string& s);

/// velocity_at_horizon = (X_h - x0)/h; skeleton_velocity = (X_{T_2n} - x0)/n for
/// the last full cycle within the trajectory; min_over_path = smallest sampled value.
double statistic_at(const Trajectory& traj, PathStatistic kind);

/// CSV with header `time,x,regime`.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace switchdiff
