#include "switchdiff/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "switchdiff/skeleton.hpp"

namespace switchdiff {

const char* to_string(EstimateKind k) { return k == EstimateKind::probability ? "probability" : "mean_of_real"; }

double normal_critical_value(double level) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * level);
}

McEstimate summarize(std::span<const double> values, EstimateKind kind, double ci_level) {
    if (values.empty()) throw DomainError("summarize: no samples");
    const double z = normal_critical_value(ci_level);
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (const double v : values) sum += v;
    const double mean = sum / n;

    McEstimate e;
    e.mean = mean;
    e.n_samples = values.size();
    e.kind = kind;
    if (kind == EstimateKind::probability) {
        const double p = std::clamp(mean, 0.0, 1.0);
        e.std_error = std::sqrt(p * (1.0 - p) / n);
        const double denom = 1.0 + z * z / n;
        const double center = (p + z * z / (2.0 * n)) / denom;
        const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
        e.ci_low = std::clamp(center - half, 0.0, p);
        e.ci_high = std::clamp(center + half, p, 1.0);
        return e;
    }
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    e.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    e.ci_low = mean - z * e.std_error;
    e.ci_high = mean + z * e.std_error;
    return e;
}

namespace detail {

void rethrow_failure(const SampleFailure& failure) {
    const std::string prefix = "sample " + std::to_string(failure.index) + ": ";
    try {
        std::rethrow_exception(failure.error);
    } catch (const NonConstantDrift& e) {
        throw NonConstantDrift(prefix + e.what());
    } catch (const DomainError& e) {
        throw DomainError(prefix + e.what());
    } catch (const std::exception& e) {
        throw SimulationError(prefix + e.what());
    }
}

void require_samples(std::size_t n) {
    if (n < 2) throw DomainError("Monte Carlo estimate needs n_samples >= 2");
}

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

}  // namespace detail

const char* to_string(StatisticKind k) {
    switch (k) {
        case StatisticKind::cycle_statistic: return "cycle_statistic";
        case StatisticKind::terminal_value: return "terminal_value";
        case StatisticKind::velocity_at_horizon: return "velocity_at_horizon";
        case StatisticKind::skeleton_velocity: return "skeleton_velocity";
        case StatisticKind::min_over_path: return "min_over_path";
    }
    return "unknown";
}

StatisticKind statistic_kind_from_string(const std::string& s) {
    for (auto k : {StatisticKind::cycle_statistic, StatisticKind::terminal_value, StatisticKind::velocity_at_horizon,
                   StatisticKind::skeleton_velocity, StatisticKind::min_over_path})
        if (s == to_string(k)) return k;
    throw DomainError("UnknownStatistic: '" + s + "'");
}

McEstimate estimate_statistic(const StatisticSpec& statistic, const ValidatedModel& model, const SimConfig& sim,
                              std::size_t n_samples, std::uint64_t master_seed, const McConfig& config) {
    auto trajectory = [&](const Skeleton& sk, double horizon, Stream& rng) {
        return sim.integrator == Integrator::exact ? simulate_exact_constant(model, sk, horizon, rng)
                                                   : simulate_em(model, sk, sim.dt, horizon, rng);
    };
    switch (statistic.kind) {
        case StatisticKind::cycle_statistic:
            return estimate(
                [&](std::size_t, Stream& rng) {
                    return cycle_statistic(sample_skeleton(model, statistic.n_cycles, rng));
                },
                EstimateKind::mean_of_real, n_samples, master_seed, config);
        case StatisticKind::terminal_value:
            return estimate(
                [&](std::size_t, Stream& rng) {
                    const auto sk = sample_skeleton_until(model, statistic.horizon, rng);
                    return simulate_endpoint(model, sk, statistic.horizon, sim, rng);
                },
                EstimateKind::mean_of_real, n_samples, master_seed, config);
        case StatisticKind::velocity_at_horizon:
            return estimate(
                [&](std::size_t, Stream& rng) {
                    const auto sk = sample_skeleton_until(model, statistic.horizon, rng);
                    return (simulate_endpoint(model, sk, statistic.horizon, sim, rng) - model.spec().x0) /
                           statistic.horizon;
                },
                EstimateKind::mean_of_real, n_samples, master_seed, config);
        case StatisticKind::skeleton_velocity:
            return estimate(
                [&](std::size_t, Stream& rng) {
                    const auto sk = sample_skeleton(model, statistic.n_cycles, rng);
                    const double t2n = sk.cycle_end(statistic.n_cycles);
                    return (simulate_endpoint(model, sk, t2n, sim, rng) - model.spec().x0) /
                           static_cast<double>(statistic.n_cycles);
                },
                EstimateKind::mean_of_real, n_samples, master_seed, config);
        case StatisticKind::min_over_path:
            return estimate(
                [&](std::size_t, Stream& rng) {
                    const auto sk = sample_skeleton_until(model, statistic.horizon, rng);
                    return statistic_at(trajectory(sk, statistic.horizon, rng), PathStatistic::min_over_path);
                },
                EstimateKind::mean_of_real, n_samples, master_seed, config);
    }
    throw DomainError("UnknownStatistic");
}

}  // namespace switchdiff
