#include "switchdiff/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "switchdiff/format.hpp"
#include "switchdiff/skeleton.hpp"

namespace switchdiff {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string label(const std::string& name, std::initializer_list<std::pair<const char*, double>> params) {
    std::string s = name + "[";
    bool first = true;
    for (const auto& [k, v] : params) {
        if (!first) s += ';';
        s += k;
        s += '=';
        s += fmt_real(v);
        first = false;
    }
    return s + "]";
}

McEstimate empty_estimate() {
    McEstimate e;
    e.mean = e.std_error = e.ci_low = e.ci_high = kNaN;
    return e;
}

BoundReport consistency_row(std::string quantity, double analytic, const McEstimate& e, double allowance = 0.0) {
    return {std::move(quantity), analytic, e, z_score(analytic, e), consistency_verdict(analytic, e, allowance), {}};
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::consistent: return "consistent";
        case Verdict::bound_holds: return "bound_holds";
        case Verdict::bound_violated: return "bound_violated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

double z_score(double analytic, const McEstimate& e) {
    const double diff = e.mean - analytic;
    if (diff == 0.0) return 0.0;
    if (e.std_error == 0.0) return diff > 0 ? std::numeric_limits<double>::infinity()
                                            : -std::numeric_limits<double>::infinity();
    return diff / e.std_error;
}

Verdict consistency_verdict(double analytic, const McEstimate& e, double allowance, double z_max) {
    if (!std::isfinite(analytic) || !std::isfinite(e.mean)) return Verdict::inconclusive;
    return std::abs(e.mean - analytic) <= z_max * e.std_error + allowance ? Verdict::consistent
                                                                          : Verdict::bound_violated;
}

Verdict bound_verdict(double analytic, const McEstimate& e, double slack) {
    if (!std::isfinite(analytic) || !std::isfinite(e.ci_low)) return Verdict::inconclusive;
    return e.ci_low <= analytic * (1.0 + slack) ? Verdict::bound_holds : Verdict::bound_violated;
}

std::uint64_t sub_seed(std::uint64_t master_seed, std::uint64_t tag) {
    return derive_key(master_seed ^ 0xa0761d6478bd642fULL, tag);
}

std::vector<BoundReport> verify_mgf(const ValidatedModel& model, const std::vector<double>& lambdas,
                                    const std::vector<std::size_t>& ns, std::size_t n_samples,
                                    std::uint64_t master_seed, const McConfig& config, bool include_excess) {
    const auto& s = model.spec();
    const double mean_cycle = 1.0 / s.lambda_plus + 1.0 / s.lambda_minus;
    const bool prefactor = s.z0 == Regime::minus;
    for (const double l : lambdas)
        if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("verify_mgf: lambdas must be finite and >= 0");
    for (const auto n : ns)
        if (n == 0) throw DomainError("verify_mgf: n must be >= 1");

    std::vector<BoundReport> rows;
    for (const auto n : ns) {
        // analytic side first so that pole violations surface as rows
        struct Column {
            double lambda;
            bool excess;
            double analytic;
        };
        std::vector<Column> columns;
        std::vector<BoundReport> domain_rows;
        for (const double l : lambdas) {
            columns.push_back({l, false, mgf_deficit(l, n, mean_cycle, s.lambda_plus, s.lambda_minus, prefactor)});
        }
        if (include_excess) {
            for (const double l : lambdas) {
                try {
                    columns.push_back({l, true, mgf_excess(l, n, mean_cycle, s.lambda_plus, s.lambda_minus, prefactor)});
                } catch (const DomainError& e) {
                    BoundReport r{label("mgf_excess", {{"lambda", l}, {"n", static_cast<double>(n)}}), kNaN,
                                  empty_estimate(), kNaN, Verdict::inconclusive,
                                  std::string("domain error: ") + e.what()};
                    domain_rows.push_back(std::move(r));
                }
            }
        }
        const double centre = mean_cycle * static_cast<double>(n);
        const auto estimates = estimate_columns(
            std::vector<EstimateKind>(columns.size(), EstimateKind::mean_of_real), n_samples,
            sub_seed(master_seed, n), config, [&](std::size_t, Stream& rng, std::span<double> out) {
                const double t2n = sample_skeleton(model, n, rng).cycle_end(n);
                for (std::size_t j = 0; j < columns.size(); ++j) {
                    const double dev = columns[j].excess ? t2n - centre : centre - t2n;
                    out[j] = std::exp(columns[j].lambda * dev);
                }
            });
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const auto& c = columns[j];
            rows.push_back(consistency_row(
                label(c.excess ? "mgf_excess" : "mgf_deficit", {{"lambda", c.lambda}, {"n", static_cast<double>(n)}}),
                c.analytic, estimates[j]));
        }
        for (auto& r : domain_rows) rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<BoundReport> verify_lln(const ValidatedModel& model, std::size_t n, double tolerance, std::size_t repeats,
                                    std::uint64_t master_seed) {
    if (n == 0) throw DomainError("verify_lln: n must be >= 1");
    if (!(tolerance > 0.0)) throw DomainError("verify_lln: tolerance must be > 0");
    if (repeats == 0) throw DomainError("verify_lln: repeats must be >= 1");
    const double mean_cycle = 1.0 / model.spec().lambda_plus + 1.0 / model.spec().lambda_minus;
    std::vector<BoundReport> rows;
    for (std::size_t r = 0; r < repeats; ++r) {
        Stream rng(master_seed, r);
        const auto sk = sample_skeleton(model, n, rng);
        McEstimate e;
        e.kind = EstimateKind::mean_of_real;
        e.n_samples = n;
        e.mean = cycle_statistic(sk);
        double sum = 0.0, ss = 0.0;
        for (std::size_t k = 1; k <= n; ++k) sum += sk.cycle_end(k) - sk.cycle_end(k - 1);
        const double m = sum / static_cast<double>(n);
        for (std::size_t k = 1; k <= n; ++k) {
            const double d = sk.cycle_end(k) - sk.cycle_end(k - 1) - m;
            ss += d * d;
        }
        e.std_error = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
        const double z = normal_critical_value(0.999);
        e.ci_low = e.mean - z * e.std_error;
        e.ci_high = e.mean + z * e.std_error;
        BoundReport row{label("cycle_lln", {{"n", static_cast<double>(n)}, {"repeat", static_cast<double>(r)}}),
                        mean_cycle, e, z_score(mean_cycle, e),
                        std::abs(e.mean - mean_cycle) < tolerance ? Verdict::consistent : Verdict::bound_violated,
                        "tolerance " + fmt_real(tolerance)};
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<BoundReport> verify_chernoff(const ValidatedModel& model, TailDirection direction, double epsilon,
                                         const std::vector<std::size_t>& ns, std::size_t n_samples,
                                         std::uint64_t master_seed, double lambda_cap, const McConfig& config) {
    const auto& s = model.spec();
    const double mean_cycle = 1.0 / s.lambda_plus + 1.0 / s.lambda_minus;
    const bool prefactor = s.z0 == Regime::minus;
    std::vector<BoundReport> rows;
    for (const auto n : ns) {
        const auto cr = chernoff_skeleton(direction, epsilon, n, s.lambda_plus, s.lambda_minus, lambda_cap, prefactor);
        std::ostringstream note;
        note << "lambda_star=" << fmt_real(cr.lambda_star) << " kappa=" << fmt_real(cr.kappa)
             << " bound_lambda=" << fmt_real(cr.bound_lambda) << (cr.boundary_hit ? " boundary_hit" : "");
        const auto q = label(std::string("chernoff_") + to_string(direction),
                             {{"eps", epsilon}, {"n", static_cast<double>(n)}});
        if (n_samples == 0) {
            rows.push_back({q, cr.bound, empty_estimate(), kNaN, Verdict::inconclusive, note.str()});
            continue;
        }
        const auto e = estimate(
            [&](std::size_t, Stream& rng) {
                const double dev = cycle_statistic(sample_skeleton(model, n, rng)) - mean_cycle;
                const bool hit = direction == TailDirection::lower_tail ? dev < -epsilon : dev > epsilon;
                return hit ? 1.0 : 0.0;
            },
            EstimateKind::probability, n_samples, sub_seed(master_seed, n), config);
        rows.push_back({q, cr.bound, e, z_score(cr.bound, e), bound_verdict(cr.bound, e), note.str()});
    }
    return rows;
}

BoundReport verify_velocity(const ValidatedModel& model, double horizon, std::size_t n_samples,
                            std::uint64_t master_seed, const SimConfig& sim, const McConfig& config) {
    if (!model.constant_drifts()) throw NonConstantDrift("verify_velocity requires constant drifts");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("verify_velocity: horizon must be > 0");
    const auto& s = model.spec();
    const auto constants = analytic_constants(model);
    const double analytic = constants.velocity_is_exact ? constants.velocity_star : constant_drift_velocity(model);
    const double bp = std::get<ConstantDrift>(s.drift_plus).value;
    const double bm = std::get<ConstantDrift>(s.drift_minus).value;
    const double allowance = std::abs(bp - bm) / ((s.lambda_plus + s.lambda_minus) * horizon);

    const auto e = estimate_statistic({StatisticKind::velocity_at_horizon, 1, horizon}, model, sim, n_samples,
                                      master_seed, config);
    auto row = consistency_row(label("velocity", {{"t", horizon}}), analytic, e, allowance);
    row.note = "bias allowance " + fmt_real(allowance) +
               (constants.velocity_is_exact ? "" : "; drifts not at bounds, renewal-reward velocity used");
    return row;
}

BoundReport verify_lemma2(const ValidatedModel& model, double lambda, double a_hat, std::size_t n,
                          std::size_t n_samples, std::uint64_t master_seed, double slack, const SimConfig& sim,
                          const McConfig& config) {
    if (n == 0) throw DomainError("verify_lemma2: n must be >= 1");
    const double analytic = lemma2_bound(lambda, a_hat, n, model);
    const double x0 = model.spec().x0;
    const auto e = estimate(
        [&](std::size_t, Stream& rng) {
            const auto sk = sample_skeleton(model, n, rng);
            const double t2n = sk.cycle_end(n);
            const double x = simulate_endpoint(model, sk, t2n, sim, rng);
            return std::exp(-lambda * (x - x0) + a_hat * lambda * t2n);
        },
        EstimateKind::mean_of_real, n_samples, master_seed, config);
    BoundReport row{label("lemma2", {{"lambda", lambda}, {"a_hat", a_hat}, {"n", static_cast<double>(n)}}),
                    analytic, e, z_score(analytic, e), bound_verdict(analytic, e, slack),
                    "slack " + fmt_real(slack)};
    if (!model.constant_at_bound()) row.note += "; drifts not at bounds (not the worst case)";
    return row;
}

TailReport verify_spatial_tail(const ValidatedModel& model, double c0, double epsilon,
                               const std::vector<double>& horizons, std::size_t n_samples,
                               std::uint64_t master_seed, const SimConfig& sim, const McConfig& config) {
    if (!(epsilon > 0.0)) throw DomainError("verify_spatial_tail: epsilon must be > 0");
    if (horizons.size() < 3) throw DomainError("verify_spatial_tail: need at least 3 horizons");
    for (const double t : horizons)
        if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("verify_spatial_tail: horizons must be > 0");

    TailReport out;
    const double x0 = model.spec().x0;
    std::vector<McEstimate> freqs;
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        const double t = horizons[h];
        freqs.push_back(estimate(
            [&](std::size_t, Stream& rng) {
                const auto sk = sample_skeleton_until(model, t, rng);
                const double x = simulate_endpoint(model, sk, t, sim, rng);
                return (x - x0) / t - c0 < -epsilon ? 1.0 : 0.0;
            },
            EstimateKind::probability, n_samples, sub_seed(master_seed, h), config));
    }

    std::vector<std::pair<double, double>> points;
    double mean_freq = 0.0;
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        mean_freq += freqs[h].mean;
        if (freqs[h].mean > 0.0) points.emplace_back(horizons[h], std::log(freqs[h].mean));
    }
    mean_freq /= static_cast<double>(horizons.size());

    McEstimate slope_est = empty_estimate();
    slope_est.n_samples = points.size();
    if (points.empty()) {
        out.verdict = Verdict::consistent;
        out.note = "below resolution: no tail event at any horizon";
    } else if (mean_freq > kTypicalEventFrequency) {
        out.verdict = Verdict::inconclusive;
        out.note = "event is typical (mean frequency " + fmt_real(mean_freq) + "), not a deviation";
    } else if (points.size() < 3) {
        out.verdict = Verdict::inconclusive;
        out.note = "fewer than 3 horizons with a resolved tail frequency";
    } else {
        out.fit = decay_rate_fit(points);
        const auto& f = *out.fit;
        slope_est.mean = f.slope;
        const double ratio = f.total_variation > 0.0 ? f.residual / f.total_variation : kNaN;
        const bool decays = f.slope < 0.0 && f.residual < kTailResidualRatio * f.total_variation;
        out.verdict = decays ? Verdict::consistent : Verdict::bound_violated;
        out.note = "slope " + fmt_real(f.slope) + ", residual/total " + fmt_real(ratio);
    }
    if (out.fit) slope_est.mean = out.fit->slope;

    for (std::size_t h = 0; h < horizons.size(); ++h) {
        out.rows.push_back({label("tail_frequency", {{"t", horizons[h]}, {"c0", c0}, {"eps", epsilon}}), kNaN,
                            freqs[h], kNaN, out.verdict, out.note});
    }
    out.rows.push_back({label("tail_decay_slope", {{"c0", c0}, {"eps", epsilon}}), 0.0, slope_est, kNaN, out.verdict,
                        out.note});
    return out;
}

}  // namespace switchdiff
