#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "switchdiff/model.hpp"

namespace testing_support {

using namespace switchdiff;

/// Always returns the same uniform and a zero normal increment.
struct StubRng {
    double u = 0.5;
    double z = 0.0;
    double uniform() { return u; }
    double normal() { return z; }
};

/// Replays a fixed list of uniforms, then repeats the last one.
struct ScriptedRng {
    std::vector<double> us;
    std::size_t next = 0;
    double uniform() { return us[next < us.size() ? next++ : us.size() - 1]; }
    double normal() { return 0.0; }
};

inline ModelSpec constant_spec(double lp, double lm, double bp, double bm, Regime z0 = Regime::plus, double x0 = 0.0) {
    ModelSpec s;
    s.lambda_plus = lp;
    s.lambda_minus = lm;
    s.drift_plus = ConstantDrift{bp};
    s.drift_minus = ConstantDrift{bm};
    s.r_plus = bp;
    s.r_minus = -bm;
    s.sup_b_plus = std::abs(bp);
    s.sup_b_minus = std::abs(bm);
    s.x0 = x0;
    s.z0 = z0;
    return s;
}

/// Constant drifts r_plus and -r_minus.
inline ValidatedModel at_bound(double lp, double lm, double rp, double rm, Regime z0 = Regime::plus, double x0 = 0.0) {
    return validate(constant_spec(lp, lm, rp, -rm, z0, x0));
}

/// E exp(s T) for T = Gamma(n, lp) + Gamma(n + [minus start], lm), by adaptive quadrature of
/// the convolved density. Independent of the closed forms.
inline double gamma_convolution_mgf(double s, std::size_t n, double lp, double lm, bool minus_start) {
    using boost::math::quadrature::gauss_kronrod;
    const double shape_p = static_cast<double>(n);
    const double shape_m = static_cast<double>(n) + (minus_start ? 1.0 : 0.0);
    auto density_m = [&](double t) {
        if (shape_m == 0.0) return 0.0;
        return boost::math::pdf(boost::math::gamma_distribution<double>(shape_m, 1.0 / lm), t);
    };
    auto density = [&](double t) {
        if (t <= 0.0) return 0.0;
        if (shape_p == 0.0) return density_m(t);
        const boost::math::gamma_distribution<double> gp(shape_p, 1.0 / lp);
        if (shape_m == 0.0) return boost::math::pdf(gp, t);
        return gauss_kronrod<double, 61>::integrate(
            [&](double u) { return boost::math::pdf(gp, u) * density_m(t - u); }, 0.0, t, 3, 1e-10);
    };
    boost::math::quadrature::exp_sinh<double> outer;
    return outer.integrate(
        [&](double t) {
            const double f = density(t);
            return f == 0.0 ? 0.0 : std::exp(s * t) * f;
        },
        1e-9);
}

/// Per-cycle lower-tail Chernoff factor by brute-force grid search at step h over (0, hi].
struct GridMin {
    double lambda = 0.0;
    double value = 1.0;
};

inline GridMin grid_search_kappa(double eps, double lp, double lm, double hi, double h) {
    const double mean_cycle = 1.0 / lp + 1.0 / lm;
    GridMin best{0.0, 1.0};
    const auto steps = static_cast<std::size_t>(hi / h);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double l = static_cast<double>(k) * h;
        const double v = std::exp(-l * eps + mean_cycle * l) * lp * lm / ((lp + l) * (lm + l));
        if (v < best.value) best = {l, v};
    }
    return best;
}

}  // namespace testing_support
