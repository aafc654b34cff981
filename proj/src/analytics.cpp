#include "switchdiff/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace switchdiff {

double LogValue::value() const { return sign * std::exp(log_magnitude); }

namespace {

void require_rates(double lambda_plus, double lambda_minus, double mean_cycle) {
    if (!(lambda_plus > 0.0 && lambda_minus > 0.0 && std::isfinite(lambda_plus) && std::isfinite(lambda_minus)))
        throw DomainError("switching intensities must be positive and finite");
    if (!(mean_cycle > 0.0) || !std::isfinite(mean_cycle)) throw DomainError("mean cycle must be positive");
}

}  // namespace

LogValue mgf_deficit_log(double lambda, std::size_t n, double mean_cycle, double lambda_plus, double lambda_minus,
                         bool with_prefactor) {
    require_rates(lambda_plus, lambda_minus, mean_cycle);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("mgf_deficit: lambda must be >= 0");
    const double log_base = mean_cycle * lambda - std::log1p(lambda / lambda_plus) - std::log1p(lambda / lambda_minus);
    double log_value = static_cast<double>(n) * log_base;
    if (with_prefactor) log_value -= std::log1p(lambda / lambda_minus);
    return {log_value, 1};
}

double mgf_deficit(double lambda, std::size_t n, double mean_cycle, double lambda_plus, double lambda_minus,
                   bool with_prefactor) {
    return mgf_deficit_log(lambda, n, mean_cycle, lambda_plus, lambda_minus, with_prefactor).value();
}

LogValue mgf_excess_log(double lambda, std::size_t n, double mean_cycle, double lambda_plus, double lambda_minus,
                        bool with_prefactor) {
    require_rates(lambda_plus, lambda_minus, mean_cycle);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("mgf_excess: lambda must be >= 0");
    if (lambda >= std::min(lambda_plus, lambda_minus)) {
        std::ostringstream os;
        os << "mgf_excess: lambda = " << lambda << " is at or beyond the pole min(lambda_plus, lambda_minus) = "
           << std::min(lambda_plus, lambda_minus);
        throw DomainError(os.str());
    }
    const double log_base = -mean_cycle * lambda - std::log1p(-lambda / lambda_plus) - std::log1p(-lambda / lambda_minus);
    double log_value = static_cast<double>(n) * log_base;
    if (with_prefactor) log_value -= std::log1p(-lambda / lambda_minus);
    return {log_value, 1};
}

double mgf_excess(double lambda, std::size_t n, double mean_cycle, double lambda_plus, double lambda_minus,
                  bool with_prefactor) {
    return mgf_excess_log(lambda, n, mean_cycle, lambda_plus, lambda_minus, with_prefactor).value();
}

const char* to_string(TailDirection d) { return d == TailDirection::lower_tail ? "lower_tail" : "upper_tail"; }

TailDirection tail_direction_from_string(const std::string& s) {
    if (s == "lower_tail" || s == "lower") return TailDirection::lower_tail;
    if (s == "upper_tail" || s == "upper") return TailDirection::upper_tail;
    throw DomainError("unknown tail direction '" + s + "'");
}

std::pair<double, double> minimize_scalar(const std::function<double(double)>& f, double lo, double hi, double tol) {
    constexpr int scan = 256;
    const double span = hi - lo;
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < scan; ++i) {
        const double x = i == scan - 1 ? hi : lo + span * i / (scan - 1);
        const double v = f(x);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    auto node = [&](int i) { return i <= 0 ? lo : i >= scan - 1 ? hi : lo + span * i / (scan - 1); };
    double a = node(best - 1);
    double b = node(best + 1);

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    double v = f(x);
    for (const double cand : {a, b, node(best)}) {
        const double cv = f(cand);
        if (cv < v) {
            v = cv;
            x = cand;
        }
    }
    return {x, v};
}

namespace {

double per_cycle_log(TailDirection direction, double lambda, double epsilon, double lp, double lm, double mean_cycle) {
    if (direction == TailDirection::lower_tail)
        return -lambda * epsilon + mean_cycle * lambda - std::log1p(lambda / lp) - std::log1p(lambda / lm);
    return -lambda * epsilon - mean_cycle * lambda - std::log1p(-lambda / lp) - std::log1p(-lambda / lm);
}

double prefactor_log(TailDirection direction, double lambda, double lm) {
    return direction == TailDirection::lower_tail ? -std::log1p(lambda / lm) : -std::log1p(-lambda / lm);
}

}  // namespace

double chernoff_log_objective(TailDirection direction, double lambda, double epsilon, std::size_t n,
                              double lambda_plus, double lambda_minus, bool with_prefactor) {
    const double mean_cycle = 1.0 / lambda_plus + 1.0 / lambda_minus;
    double v = static_cast<double>(n) * per_cycle_log(direction, lambda, epsilon, lambda_plus, lambda_minus, mean_cycle);
    if (with_prefactor) v += prefactor_log(direction, lambda, lambda_minus);
    return v;
}

ChernoffResult chernoff_skeleton(TailDirection direction, double epsilon, std::size_t n, double lambda_plus,
                                 double lambda_minus, double lambda_cap, bool with_prefactor) {
    require_rates(lambda_plus, lambda_minus, 1.0 / lambda_plus + 1.0 / lambda_minus);
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("chernoff_skeleton: epsilon must be > 0");
    if (n == 0) throw DomainError("chernoff_skeleton: n must be >= 1");
    const double cap = direction == TailDirection::upper_tail
                           ? std::min(lambda_plus, lambda_minus) * (1.0 - 1e-9)
                           : lambda_cap;
    if (!(cap > 0.0) || !std::isfinite(cap)) throw DomainError("chernoff_skeleton: lambda_cap must be positive");
    const double mean_cycle = 1.0 / lambda_plus + 1.0 / lambda_minus;

    ChernoffResult out;
    const auto [ls, lk] = minimize_scalar(
        [&](double l) { return per_cycle_log(direction, l, epsilon, lambda_plus, lambda_minus, mean_cycle); }, 0.0, cap);
    out.lambda_star = ls;
    out.kappa = std::min(1.0, std::exp(lk));
    out.boundary_hit = cap - ls <= 1e-9 * cap;

    const auto [lb, lv] = minimize_scalar(
        [&](double l) {
            return chernoff_log_objective(direction, l, epsilon, n, lambda_plus, lambda_minus, with_prefactor);
        },
        0.0, cap);
    out.bound_lambda = lb;
    out.bound = std::min(1.0, std::exp(lv));
    return out;
}

double lemma2_bound(double lambda, double a_hat, std::size_t n, double r_plus, double r_minus, double lambda_plus,
                    double lambda_minus) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lemma2_bound: lambda must be >= 0");
    const auto a2 = a2_coefficient(a_hat, r_plus, r_minus, lambda_plus, lambda_minus);
    if (!(a2.value > 0.0)) {
        std::ostringstream os;
        os << "lemma2_bound: a_2 = " << a2.value << " is not positive (a_hat outside the admissible window)";
        throw DomainError(os.str());
    }
    if (a2.value * lambda >= 1.0) {
        std::ostringstream os;
        os << "lemma2_bound: a_2 * lambda = " << a2.value * lambda << " >= 1";
        throw DomainError(os.str());
    }
    return std::exp(static_cast<double>(n) * std::log1p(-a2.value * lambda));
}

double lemma2_bound(double lambda, double a_hat, std::size_t n, const ValidatedModel& model) {
    const auto& s = model.spec();
    return lemma2_bound(lambda, a_hat, n, s.r_plus, s.r_minus, s.lambda_plus, s.lambda_minus);
}

DecayFit decay_rate_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw DegenerateInput("decay_rate_fit: need at least 3 points");
    for (const auto& [t, lp] : points)
        if (!std::isfinite(t) || !std::isfinite(lp)) throw DegenerateInput("decay_rate_fit: non-finite point");
    const double n = static_cast<double>(points.size());
    double mt = 0.0, my = 0.0;
    for (const auto& [t, y] : points) {
        mt += t;
        my += y;
    }
    mt /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [t, y] : points) {
        sxx += (t - mt) * (t - mt);
        sxy += (t - mt) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) throw DegenerateInput("decay_rate_fit: all t are equal");
    DecayFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mt;
    for (const auto& [t, y] : points) {
        const double r = y - (fit.intercept + fit.slope * t);
        fit.residual += r * r;
    }
    fit.total_variation = syy;
    return fit;
}

}  // namespace switchdiff
