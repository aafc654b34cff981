#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "switchdiff/errors.hpp"

namespace switchdiff {

/// Regime "plus" has drift >= r_plus and leaves at rate lambda_plus;
/// regime "minus" has drift >= -r_minus and leaves at rate lambda_minus.
enum class Regime { plus, minus };

inline Regime flip(Regime r) { return r == Regime::plus ? Regime::minus : Regime::plus; }
const char* to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct ConstantDrift {
    double value = 0.0;
    friend bool operator==(const ConstantDrift&, const ConstantDrift&) = default;
};

/// b(x) = offset + amplitude * tanh(x / scale)
struct TanhDrift {
    double offset = 0.0;
    double amplitude = 0.0;
    double scale = 1.0;
    friend bool operator==(const TanhDrift&, const TanhDrift&) = default;
};

/// Arbitrary callable with a declared lower bound. Not serializable.
struct CustomDrift {
    std::function<double(double)> fn;
    double lower_bound = 0.0;
    std::string label = "custom";
    // callables are not comparable; equality goes by label and declared bound
    friend bool operator==(const CustomDrift& a, const CustomDrift& b) {
        return a.label == b.label && a.lower_bound == b.lower_bound;
    }
};

using Drift = std::variant<ConstantDrift, TanhDrift, CustomDrift>;

double evaluate(const Drift& drift, double x);
bool is_constant(const Drift& drift);
/// Analytic sup-norm of the drift when one is known (constant, tanh); NaN for custom drifts.
double natural_sup(const Drift& drift);

struct ModelSpec {
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
    Drift drift_plus = ConstantDrift{1.0};
    Drift drift_minus = ConstantDrift{-1.0};
    double r_plus = 1.0;
    double r_minus = 1.0;
    double sup_b_plus = 1.0;
    double sup_b_minus = 1.0;
    double x0 = 0.0;
    Regime z0 = Regime::plus;
    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Where bounded (non-constant) drifts are probed during validation.
struct ProbeGrid {
    std::size_t points = 1001;
    double half_width = 100.0;  // grid covers [x0 - half_width, x0 + half_width]
    friend bool operator==(const ProbeGrid&, const ProbeGrid&) = default;
};

/// Every violated constraint of `spec`; empty when the model is valid.
std::vector<Violation> check(const ModelSpec& spec, const ProbeGrid& grid = {});

/// A ModelSpec that passed `validate`. Immutable.
class ValidatedModel {
public:
    const ModelSpec& spec() const noexcept { return spec_; }

    double lambda(Regime r) const { return r == Regime::plus ? spec_.lambda_plus : spec_.lambda_minus; }
    double drift(Regime r, double x) const {
        return evaluate(r == Regime::plus ? spec_.drift_plus : spec_.drift_minus, x);
    }
    const Drift& drift_of(Regime r) const {
        return r == Regime::plus ? spec_.drift_plus : spec_.drift_minus;
    }
    bool constant_drifts() const { return is_constant(spec_.drift_plus) && is_constant(spec_.drift_minus); }
    /// Both drifts constant and equal to r_plus / -r_minus.
    bool constant_at_bound() const;

private:
    explicit ValidatedModel(ModelSpec spec) : spec_(std::move(spec)) {}
    friend ValidatedModel validate(const ModelSpec&, const ProbeGrid&);

    ModelSpec spec_;
};

/// Throws ValidationError listing every violation.
ValidatedModel validate(const ModelSpec& spec, const ProbeGrid& grid = {});

/// r_plus / lambda_plus > r_minus / lambda_minus (strict). Throws DomainError on non-positive input.
bool transience_condition(double r_plus, double lambda_plus, double r_minus, double lambda_minus);

struct AnalyticConstants {
    double mean_cycle = 0.0;     // 1/lambda_plus + 1/lambda_minus
    double velocity_star = 0.0;  // (lambda_minus r_plus - lambda_plus r_minus) / (lambda_plus + lambda_minus)
    double a_hat_max = 0.0;      // same expression; upper edge of the a_hat window
    // min(mean_cycle, a_hat_max). Note this compares a time with a velocity;
    // it is kept verbatim as the admissibility cap for c_1.
    double c1_max = 0.0;
    bool transient = false;
    // velocity_star is the exact long-run velocity only when both drifts sit at their bounds;
    // otherwise it is a lower-bound heuristic.
    bool velocity_is_exact = false;
};

AnalyticConstants analytic_constants(const ValidatedModel& model);

/// Long-run velocity for arbitrary constant drifts by renewal-reward:
/// (b_plus/lambda_plus + b_minus/lambda_minus) / (1/lambda_plus + 1/lambda_minus).
double constant_drift_velocity(const ValidatedModel& model);

struct A2Coefficient {
    double value = 0.0;
    bool in_window = false;  // 0 < a_hat < a_hat_max
};

/// a_2 = -[(a_hat - r_plus)/lambda_plus + (a_hat + r_minus)/lambda_minus],
/// positive exactly when a_hat is below a_hat_max.
A2Coefficient a2_coefficient(double a_hat, double r_plus, double r_minus, double lambda_plus,
                             double lambda_minus);

}  // namespace switchdiff
