#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <vector>

#include "switchdiff/model.hpp"
#include "switchdiff/path.hpp"
#include "switchdiff/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace switchdiff {

enum class EstimateKind { mean_of_real, probability };

const char* to_string(EstimateKind k);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    EstimateKind kind = EstimateKind::mean_of_real;

    friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

struct McConfig {
    int threads = 0;          // 0: OpenMP default
    double ci_level = 0.999;  // two-sided
    bool serial_reference = false;  // run the plain loop instead of the OpenMP kernel
};

/// Two-sided standard normal quantile for the given confidence level.
double normal_critical_value(double level);

/// Column-major sample storage: value of column j for sample i is at data[j * rows + i].
struct SampleMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    std::span<const double> column(std::size_t j) const { return {data.data() + j * rows, rows}; }
};

/// Mean, standard error and interval in sample-index order. Probability columns
/// (values in {0, 1}) get a Wilson score interval; real columns a normal interval.
McEstimate summarize(std::span<const double> values, EstimateKind kind, double ci_level = 0.999);

namespace detail {

struct SampleFailure {
    std::size_t index = 0;
    std::exception_ptr error;
};

[[noreturn]] void rethrow_failure(const SampleFailure& failure);
void require_samples(std::size_t n);
int resolve_threads(int threads);

}  // namespace detail

/// Reference implementation: sample i runs on Stream(master_seed, i), in order.
/// kernel(std::size_t index, Stream& rng, std::span<double> out) fills `cols` values.
template <class Kernel>
SampleMatrix sample_serial(std::size_t cols, std::size_t n, std::uint64_t master_seed, Kernel&& kernel) {
    SampleMatrix m{n, cols, std::vector<double>(n * cols)};
    std::vector<double> buf(cols);
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng(master_seed, i);
        try {
            kernel(i, rng, std::span<double>(buf));
        } catch (...) {
            detail::rethrow_failure({i, std::current_exception()});
        }
        for (std::size_t j = 0; j < cols; ++j) m.data[j * n + i] = buf[j];
    }
    return m;
}

/// OpenMP kernel. Streams derive from (master_seed, index) and every sample writes its own
/// slot, so the matrix is bit-identical to sample_serial for any thread count.
template <class Kernel>
SampleMatrix sample_parallel(std::size_t cols, std::size_t n, std::uint64_t master_seed, int threads,
                             Kernel&& kernel) {
    SampleMatrix m{n, cols, std::vector<double>(n * cols)};
    detail::SampleFailure failure{n, nullptr};
    const auto count = static_cast<long long>(n);
    [[maybe_unused]] const int nt = detail::resolve_threads(threads);
#pragma omp parallel num_threads(nt)
    {
        std::vector<double> buf(cols);
#pragma omp for schedule(dynamic, 64)
        for (long long ii = 0; ii < count; ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            Stream rng(master_seed, i);
            try {
                kernel(i, rng, std::span<double>(buf));
                for (std::size_t j = 0; j < cols; ++j) m.data[j * n + i] = buf[j];
            } catch (...) {
#pragma omp critical(switchdiff_sample_failure)
                {
                    // keep the lowest failing index so the report does not depend on scheduling
                    if (i < failure.index) failure = {i, std::current_exception()};
                }
            }
        }
    }
    if (failure.error) detail::rethrow_failure(failure);
    return m;
}

template <class Kernel>
SampleMatrix sample(std::size_t cols, std::size_t n, std::uint64_t master_seed, const McConfig& config,
                    Kernel&& kernel) {
    detail::require_samples(n);
    if (config.serial_reference) return sample_serial(cols, n, master_seed, kernel);
    return sample_parallel(cols, n, master_seed, config.threads, kernel);
}

/// One estimate per column; kinds.size() is the column count.
template <class Kernel>
std::vector<McEstimate> estimate_columns(const std::vector<EstimateKind>& kinds, std::size_t n,
                                         std::uint64_t master_seed, const McConfig& config, Kernel&& kernel) {
    const auto m = sample(kinds.size(), n, master_seed, config, kernel);
    std::vector<McEstimate> out;
    out.reserve(kinds.size());
    for (std::size_t j = 0; j < kinds.size(); ++j) out.push_back(summarize(m.column(j), kinds[j], config.ci_level));
    return out;
}

/// kernel(std::size_t index, Stream& rng) -> double
template <class Kernel>
McEstimate estimate(Kernel&& kernel, EstimateKind kind, std::size_t n, std::uint64_t master_seed,
                    const McConfig& config = {}) {
    return estimate_columns({kind}, n, master_seed, config,
                            [&](std::size_t i, Stream& rng, std::span<double> out) { out[0] = kernel(i, rng); })
        .front();
}

enum class StatisticKind { cycle_statistic, terminal_value, velocity_at_horizon, skeleton_velocity, min_over_path };

const char* to_string(StatisticKind k);
StatisticKind statistic_kind_from_string(const std::string& s);

struct StatisticSpec {
    StatisticKind kind = StatisticKind::cycle_statistic;
    std::size_t n_cycles = 1;  // cycle_statistic, skeleton_velocity
    double horizon = 1.0;      // path statistics
};

/// Monte Carlo estimate of a named trajectory/skeleton statistic.
McEstimate estimate_statistic(const StatisticSpec& statistic, const ValidatedModel& model, const SimConfig& sim,
                              std::size_t n_samples, std::uint64_t master_seed, const McConfig& config = {});

}  // namespace switchdiff
