#include "switchdiff/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace switchdiff {

const char* to_string(ViolationCode code) {
    switch (code) {
        case ViolationCode::non_positive_intensity: return "NonPositiveIntensity";
        case ViolationCode::non_positive_drift_bound: return "NonPositiveDriftBound";
        case ViolationCode::bound_violated_at_probe: return "BoundViolatedAtProbe";
        case ViolationCode::non_finite_field: return "NonFiniteField";
        case ViolationCode::inconsistent_bounds: return "InconsistentBounds";
        case ViolationCode::missing_field: return "MissingField";
        case ViolationCode::invalid_parameter: return "InvalidParameter";
    }
    return "Unknown";
}

namespace {

std::string describe(const std::vector<Violation>& violations) {
    std::ostringstream os;
    os << "model validation failed:";
    for (const auto& v : violations) os << "\n  " << to_string(v.code) << " [" << v.field << "]: " << v.message;
    return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(describe(violations)), violations_(std::move(violations)) {}

const char* to_string(Regime r) { return r == Regime::plus ? "plus" : "minus"; }

Regime regime_from_string(const std::string& s) {
    if (s == "plus" || s == "+") return Regime::plus;
    if (s == "minus" || s == "-") return Regime::minus;
    throw DomainError("unknown regime label '" + s + "' (expected plus or minus)");
}

double evaluate(const Drift& drift, double x) {
    struct Visitor {
        double x;
        double operator()(const ConstantDrift& d) const { return d.value; }
        double operator()(const TanhDrift& d) const { return d.offset + d.amplitude * std::tanh(x / d.scale); }
        double operator()(const CustomDrift& d) const { return d.fn(x); }
    };
    return std::visit(Visitor{x}, drift);
}

bool is_constant(const Drift& drift) { return std::holds_alternative<ConstantDrift>(drift); }

double natural_sup(const Drift& drift) {
    if (const auto* c = std::get_if<ConstantDrift>(&drift)) return std::abs(c->value);
    if (const auto* t = std::get_if<TanhDrift>(&drift)) return std::abs(t->offset) + std::abs(t->amplitude);
    return std::numeric_limits<double>::quiet_NaN();
}

namespace {

void require_finite(std::vector<Violation>& out, const char* field, double v) {
    if (!std::isfinite(v))
        out.push_back({ViolationCode::non_finite_field, field, std::string(field) + " must be finite"});
}

// Lower bound check for one regime: constant drifts are checked directly,
// everything else on the probe grid.
void check_drift(std::vector<Violation>& out, const char* field, const Drift& drift, double lower,
                 double sup, double x0, const ProbeGrid& grid) {
    if (const auto* c = std::get_if<ConstantDrift>(&drift)) {
        if (!std::isfinite(c->value)) {
            out.push_back({ViolationCode::non_finite_field, field, "drift value must be finite"});
        } else if (c->value < lower) {
            std::ostringstream os;
            os << "constant drift " << c->value << " is below the declared bound " << lower;
            out.push_back({ViolationCode::bound_violated_at_probe, field, os.str(), x0});
        } else if (std::abs(c->value) > sup) {
            std::ostringstream os;
            os << "|drift| = " << std::abs(c->value) << " exceeds declared sup-norm " << sup;
            out.push_back({ViolationCode::bound_violated_at_probe, field, os.str(), x0});
        }
        return;
    }
    if (const auto* t = std::get_if<TanhDrift>(&drift)) {
        if (!(std::isfinite(t->offset) && std::isfinite(t->amplitude) && std::isfinite(t->scale)) ||
            t->scale == 0.0) {
            out.push_back({ViolationCode::non_finite_field, field, "tanh drift needs finite parameters and scale != 0"});
            return;
        }
    }
    if (const auto* c = std::get_if<CustomDrift>(&drift)) {
        if (!c->fn) {
            out.push_back({ViolationCode::non_finite_field, field, "custom drift has no callable"});
            return;
        }
        if (c->lower_bound < lower) {
            std::ostringstream os;
            os << "declared lower bound " << c->lower_bound << " is below the required " << lower;
            out.push_back({ViolationCode::inconsistent_bounds, field, os.str()});
        }
    }
    if (grid.points == 0) return;
    const double lo = x0 - grid.half_width;
    const double step = grid.points > 1 ? 2.0 * grid.half_width / static_cast<double>(grid.points - 1) : 0.0;
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double x = grid.points > 1 ? lo + step * static_cast<double>(i) : x0;
        const double b = evaluate(drift, x);
        if (!std::isfinite(b) || b < lower || std::abs(b) > sup) {
            std::ostringstream os;
            os << "drift(" << x << ") = " << b << " outside [" << lower << ", " << sup << "]";
            out.push_back({ViolationCode::bound_violated_at_probe, field, os.str(), x});
            return;  // first offending probe is enough
        }
    }
}

}  // namespace

std::vector<Violation> check(const ModelSpec& s, const ProbeGrid& grid) {
    std::vector<Violation> out;
    require_finite(out, "lambda_plus", s.lambda_plus);
    require_finite(out, "lambda_minus", s.lambda_minus);
    require_finite(out, "r_plus", s.r_plus);
    require_finite(out, "r_minus", s.r_minus);
    require_finite(out, "sup_b_plus", s.sup_b_plus);
    require_finite(out, "sup_b_minus", s.sup_b_minus);
    require_finite(out, "x0", s.x0);
    if (!out.empty()) return out;

    if (!(s.lambda_plus > 0.0))
        out.push_back({ViolationCode::non_positive_intensity, "lambda_plus", "lambda_plus must be > 0"});
    if (!(s.lambda_minus > 0.0))
        out.push_back({ViolationCode::non_positive_intensity, "lambda_minus", "lambda_minus must be > 0"});
    if (!(s.r_plus > 0.0))
        out.push_back({ViolationCode::non_positive_drift_bound, "r_plus", "r_plus must be > 0"});
    if (!(s.r_minus > 0.0))
        out.push_back({ViolationCode::non_positive_drift_bound, "r_minus", "r_minus must be > 0"});
    if (s.r_plus > s.sup_b_plus)
        out.push_back({ViolationCode::inconsistent_bounds, "sup_b_plus", "r_plus must not exceed sup_b_plus"});
    if (s.r_minus > s.sup_b_minus)
        out.push_back({ViolationCode::inconsistent_bounds, "sup_b_minus", "r_minus must not exceed sup_b_minus"});

    check_drift(out, "drift_plus", s.drift_plus, s.r_plus, s.sup_b_plus, s.x0, grid);
    check_drift(out, "drift_minus", s.drift_minus, -s.r_minus, s.sup_b_minus, s.x0, grid);
    return out;
}

ValidatedModel validate(const ModelSpec& spec, const ProbeGrid& grid) {
    auto violations = check(spec, grid);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return ValidatedModel(spec);
}

bool ValidatedModel::constant_at_bound() const {
    const auto* p = std::get_if<ConstantDrift>(&spec_.drift_plus);
    const auto* m = std::get_if<ConstantDrift>(&spec_.drift_minus);
    return p && m && p->value == spec_.r_plus && m->value == -spec_.r_minus;
}

bool transience_condition(double r_plus, double lambda_plus, double r_minus, double lambda_minus) {
    if (!(r_plus > 0.0 && lambda_plus > 0.0 && r_minus > 0.0 && lambda_minus > 0.0))
        throw DomainError("transience_condition: all arguments must be positive");
    return r_plus / lambda_plus > r_minus / lambda_minus;
}

AnalyticConstants analytic_constants(const ValidatedModel& model) {
    const auto& s = model.spec();
    AnalyticConstants c;
    c.mean_cycle = 1.0 / s.lambda_plus + 1.0 / s.lambda_minus;
    c.velocity_star = (s.lambda_minus * s.r_plus - s.lambda_plus * s.r_minus) / (s.lambda_plus + s.lambda_minus);
    c.a_hat_max = c.velocity_star;
    c.c1_max = std::min(c.mean_cycle, c.a_hat_max);
    c.transient = transience_condition(s.r_plus, s.lambda_plus, s.r_minus, s.lambda_minus);
    c.velocity_is_exact = model.constant_at_bound();
    return c;
}

double constant_drift_velocity(const ValidatedModel& model) {
    if (!model.constant_drifts())
        throw NonConstantDrift("constant_drift_velocity requires constant drifts in both regimes");
    const auto& s = model.spec();
    const double bp = std::get<ConstantDrift>(s.drift_plus).value;
    const double bm = std::get<ConstantDrift>(s.drift_minus).value;
    return (bp / s.lambda_plus + bm / s.lambda_minus) / (1.0 / s.lambda_plus + 1.0 / s.lambda_minus);
}

A2Coefficient a2_coefficient(double a_hat, double r_plus, double r_minus, double lambda_plus,
                             double lambda_minus) {
    if (!(lambda_plus > 0.0 && lambda_minus > 0.0))
        throw DomainError("a2_coefficient: intensities must be positive");
    if (!(r_plus > 0.0 && r_minus >= 0.0 && a_hat >= 0.0))
        throw DomainError("a2_coefficient: need r_plus > 0, r_minus >= 0, a_hat >= 0");
    const double a_hat_max = (lambda_minus * r_plus - lambda_plus * r_minus) / (lambda_plus + lambda_minus);
    A2Coefficient out;
    out.value = -((a_hat - r_plus) / lambda_plus + (a_hat + r_minus) / lambda_minus);
    out.in_window = a_hat > 0.0 && a_hat < a_hat_max;
    return out;
}

}  // namespace switchdiff
