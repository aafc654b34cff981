#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "switchdiff/analytics.hpp"
#include "switchdiff/montecarlo.hpp"

namespace switchdiff {

enum class Verdict { consistent, bound_holds, bound_violated, inconclusive };

const char* to_string(Verdict v);

/// Analytic value against a Monte Carlo estimate.
///
/// Verdict thresholds:
///   consistency checks: consistent iff |estimate - analytic| <= z_max * se + allowance,
///                       otherwise bound_violated (the claimed identity fails);
///   bound checks:       bound_holds iff ci_low <= analytic * (1 + slack), otherwise bound_violated;
///   rows with no analytic counterpart or a surfaced domain error are inconclusive.
struct BoundReport {
    std::string quantity;
    double analytic = 0.0;
    McEstimate estimate;
    double z_score = 0.0;
    Verdict verdict = Verdict::inconclusive;
    std::string note;
};

inline constexpr double kConsistencyZ = 4.0;
inline constexpr double kLemma2Slack = 0.05;
inline constexpr double kTailResidualRatio = 0.10;
inline constexpr double kTypicalEventFrequency = 0.5;

/// (mean - analytic) / se; 0 when both the difference and se vanish.
double z_score(double analytic, const McEstimate& e);
Verdict consistency_verdict(double analytic, const McEstimate& e, double allowance = 0.0, double z_max = kConsistencyZ);
Verdict bound_verdict(double analytic, const McEstimate& e, double slack = 0.0);

/// Seed for campaign component `tag`; keeps components statistically independent.
std::uint64_t sub_seed(std::uint64_t master_seed, std::uint64_t tag);

/// For each (lambda, n): MC mean of exp(lambda (Lambda n - T_2n)) against mgf_deficit and,
/// when include_excess, of exp(lambda (T_2n - Lambda n)) against mgf_excess. The prefactor
/// follows the model's starting regime. Excess rows beyond the pole carry the domain error.
std::vector<BoundReport> verify_mgf(const ValidatedModel& model, const std::vector<double>& lambdas,
                                    const std::vector<std::size_t>& ns, std::size_t n_samples,
                                    std::uint64_t master_seed, const McConfig& config = {},
                                    bool include_excess = true);

/// `repeats` independent skeletons of n cycles; each row compares T_2n/n with the mean cycle.
/// The standard error is that of the n observed cycle lengths.
std::vector<BoundReport> verify_lln(const ValidatedModel& model, std::size_t n, double tolerance,
                                    std::size_t repeats, std::uint64_t master_seed);

/// Empirical frequency of the skeleton tail event against the Chernoff bound, per n.
std::vector<BoundReport> verify_chernoff(const ValidatedModel& model, TailDirection direction, double epsilon,
                                         const std::vector<std::size_t>& ns, std::size_t n_samples,
                                         std::uint64_t master_seed, double lambda_cap = 1e3,
                                         const McConfig& config = {});

/// MC mean of (X_t - x0)/t against velocity_star (constant drifts only). The O(1/t)
/// start-up bias is absorbed by an allowance |b_plus - b_minus| / ((lp + lm) t).
BoundReport verify_velocity(const ValidatedModel& model, double horizon, std::size_t n_samples,
                            std::uint64_t master_seed, const SimConfig& sim = {}, const McConfig& config = {});

/// MC mean of exp(-lambda (X_T2n - x0) + a_hat lambda T_2n) against (1 - a_2 lambda)^n.
BoundReport verify_lemma2(const ValidatedModel& model, double lambda, double a_hat, std::size_t n,
                          std::size_t n_samples, std::uint64_t master_seed, double slack = kLemma2Slack,
                          const SimConfig& sim = {}, const McConfig& config = {});

struct TailReport {
    std::vector<BoundReport> rows;  // one per horizon, then the fitted slope
    std::optional<DecayFit> fit;
    Verdict verdict = Verdict::inconclusive;
    std::string note;
};

/// Frequencies of {(X_t - x0)/t - c0 < -eps} per horizon and an exponential decay fit.
/// consistent: slope < 0 with residual < 10% of total variation, or every frequency is 0
/// ("below resolution"); inconclusive: the event is typical (mean frequency > 0.5) or fewer
/// than 3 horizons resolved; bound_violated otherwise.
TailReport verify_spatial_tail(const ValidatedModel& model, double c0, double epsilon,
                               const std::vector<double>& horizons, std::size_t n_samples,
                               std::uint64_t master_seed, const SimConfig& sim = {}, const McConfig& config = {});

}  // namespace switchdiff
