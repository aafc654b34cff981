#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "switchdiff/model.hpp"

namespace switchdiff {

/// A positive quantity carried in log space so that n ~ 1e6 cycles cannot overflow.
struct LogValue {
    double log_magnitude = 0.0;
    int sign = 1;

    double value() const;
};

/// E exp(lambda (Lambda n - T_2n)) for exponential holding times:
///
///   [lm/(lm+lambda)] * ( lp lm / ((lp+lambda)(lm+lambda)) * e^{Lambda lambda} )^n
///
/// The bracketed prefactor is E exp(-lambda T_0) for a start in "minus";
/// pass with_prefactor = false for a start in "plus" (T_0 = 0).
LogValue mgf_deficit_log(double lambda, std::size_t n, double mean_cycle, double lambda_plus, double lambda_minus,
                         bool with_prefactor = true);
double mgf_deficit(double lambda, std::size_t n, double mean_cycle, double lambda_plus, double lambda_minus,
                   bool with_prefactor = true);

/// E exp(lambda (T_2n - Lambda n)); finite only for lambda < min(lp, lm):
///
///   [lm/(lm-lambda)] * ( lp lm / ((lp-lambda)(lm-lambda)) * e^{-Lambda lambda} )^n
LogValue mgf_excess_log(double lambda, std::size_t n, double mean_cycle, double lambda_plus, double lambda_minus,
                        bool with_prefactor = true);
double mgf_excess(double lambda, std::size_t n, double mean_cycle, double lambda_plus, double lambda_minus,
                  bool with_prefactor = true);

enum class TailDirection { lower_tail, upper_tail };

const char* to_string(TailDirection d);
TailDirection tail_direction_from_string(const std::string& s);

struct ChernoffResult {
    // Minimizer and minimum of the per-cycle factor e^{-lambda eps} * base(lambda).
    double lambda_star = 0.0;
    double kappa = 1.0;
    // min over lambda of the full n-cycle objective (prefactor included), capped at 1.
    double bound = 1.0;
    double bound_lambda = 0.0;
    bool boundary_hit = false;  // lambda_star sits at the search cap
};

/// Chernoff bound on P(T_2n/n - Lambda < -eps) (lower_tail) or P(T_2n/n - Lambda > eps)
/// (upper_tail) with Lambda = 1/lp + 1/lm. The search interval is (0, lambda_cap] for the
/// lower tail and (0, min(lp, lm)(1 - 1e-9)] for the upper tail; golden-section search
/// to 1e-10 inside the bracket found by a 256-point scan.
ChernoffResult chernoff_skeleton(TailDirection direction, double epsilon, std::size_t n, double lambda_plus,
                                 double lambda_minus, double lambda_cap = 1e3, bool with_prefactor = true);

/// Log of the n-cycle objective minimized by chernoff_skeleton, for recomputation checks.
double chernoff_log_objective(TailDirection direction, double lambda, double epsilon, std::size_t n,
                              double lambda_plus, double lambda_minus, bool with_prefactor = true);

/// Minimizes a unimodal f on [lo, hi]: 256-point scan, then golden section to `tol`.
/// Returns (argmin, min). Endpoints are always candidates.
std::pair<double, double> minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                                          double tol = 1e-10);

/// (1 - a_2 lambda)^n with a_2 = a2_coefficient(a_hat, ...). Throws DomainError when
/// a_2 <= 0 or a_2 lambda >= 1.
double lemma2_bound(double lambda, double a_hat, std::size_t n, double r_plus, double r_minus, double lambda_plus,
                    double lambda_minus);
double lemma2_bound(double lambda, double a_hat, std::size_t n, const ValidatedModel& model);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;         // sum of squared residuals
    double total_variation = 0.0;  // sum of squared deviations of log p from its mean
};

/// Ordinary least squares of log p on t. Needs >= 3 finite points with distinct t
/// (DegenerateInput otherwise). The slope estimates log kappa.
DecayFit decay_rate_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace switchdiff
