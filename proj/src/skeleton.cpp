#include "switchdiff/skeleton.hpp"

#include <algorithm>
#include <ostream>

#include "switchdiff/format.hpp"

namespace switchdiff {

double sample_holding_time(double rate, double u) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("sample_holding_time: rate must be positive and finite");
    if (!(u > 0.0 && u <= 1.0)) throw DomainError("sample_holding_time: u must lie in (0, 1]");
    // + 0.0 turns -0 (u == 1) into +0
    return -std::log(u) / rate + 0.0;
}

namespace detail {
void require_cycles(std::size_t n_cycles) {
    if (n_cycles == 0) throw DomainError("sample_skeleton: n_cycles must be >= 1");
}
}  // namespace detail

Regime Skeleton::regime_at(double t) const {
    if (t < t0) return initial_regime;  // only reachable when starting in minus
    const auto it = std::upper_bound(switch_times.begin(), switch_times.end(), t);
    const auto passed = static_cast<std::size_t>(it - switch_times.begin());
    return passed == 0 ? Regime::plus : regime_after_switch(passed - 1);
}

double cycle_statistic(const Skeleton& skeleton) {
    const std::size_t n = skeleton.full_cycles();
    if (n == 0) throw DomainError("cycle_statistic: skeleton has no full cycle");
    return skeleton.cycle_end(n) / static_cast<double>(n);
}

void write_skeleton_csv(std::ostream& os, const Skeleton& skeleton) {
    os << "index,time,regime_after\n";
    os << 0 << ',' << fmt_real(skeleton.t0) << ',' << to_string(Regime::plus) << '\n';
    for (std::size_t i = 0; i < skeleton.switch_times.size(); ++i)
        os << i + 1 << ',' << fmt_real(skeleton.switch_times[i]) << ','
           << to_string(Skeleton::regime_after_switch(i)) << '\n';
}

}  // namespace switchdiff
