#include "switchdiff/path.hpp"

#include <ostream>
#include <sstream>

#include "switchdiff/format.hpp"

namespace switchdiff {

const char* to_string(Integrator i) { return i == Integrator::exact ? "exact" : "em"; }

Integrator integrator_from_string(const std::string& s) {
    if (s == "exact") return Integrator::exact;
    if (s == "em" || s == "euler_maruyama") return Integrator::euler_maruyama;
    throw DomainError("unknown integrator '" + s + "' (expected exact or em)");
}

namespace detail {

void require_horizon(const Skeleton& skeleton, double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive and finite");
    if (skeleton.end_time() < horizon) {
        std::ostringstream os;
        os << "skeleton ends at " << skeleton.end_time() << ", before the horizon " << horizon;
        throw DomainError(os.str());
    }
}

void require_step(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("NonPositiveStep: dt must be positive and finite");
}

void throw_non_finite(double t, double x) {
    std::ostringstream os;
    os << "non-finite state X(" << t << ") = " << x << "; check the drift";
    throw SimulationError(os.str());
}

std::vector<double> breakpoints(const Skeleton& skeleton, double horizon) {
    std::vector<double> out;
    if (skeleton.t0 > 0.0 && skeleton.t0 < horizon) out.push_back(skeleton.t0);
    for (const double t : skeleton.switch_times) {
        if (t >= horizon) break;
        out.push_back(t);
    }
    out.push_back(horizon);
    return out;
}

}  // namespace detail

const char* to_string(PathStatistic k) {
    switch (k) {
        case PathStatistic::velocity_at_horizon: return "velocity_at_horizon";
        case PathStatistic::skeleton_velocity: return "skeleton_velocity";
        case PathStatistic::min_over_path: return "min_over_path";
    }
    return "unknown";
}

PathStatistic path_statistic_from_string(const std::string& s) {
    if (s == "velocity_at_horizon") return PathStatistic::velocity_at_horizon;
    if (s == "skeleton_velocity") return PathStatistic::skeleton_velocity;
    if (s == "min_over_path") return PathStatistic::min_over_path;
    throw DomainError("UnknownStatistic: '" + s + "'");
}

double statistic_at(const Trajectory& traj, PathStatistic kind) {
    if (traj.times.empty()) throw DomainError("statistic_at: empty trajectory");
    const double x0 = traj.values.front();
    switch (kind) {
        case PathStatistic::velocity_at_horizon: {
            const double h = traj.times.back();
            if (!(h > 0.0)) throw DomainError("velocity_at_horizon: trajectory has zero length");
            return (traj.values.back() - x0) / h;
        }
        case PathStatistic::skeleton_velocity: {
            const double horizon = traj.times.back();
            std::size_t k = traj.skeleton.full_cycles();
            while (k > 0 && traj.skeleton.cycle_end(k) > horizon) --k;
            if (k == 0) throw DomainError("skeleton_velocity: no full cycle inside the trajectory");
            const double t2k = traj.skeleton.cycle_end(k);
            const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t2k);
            if (it == traj.times.end() || *it != t2k) throw DomainError("skeleton_velocity: T_2n is not a node");
            const double x = traj.values[static_cast<std::size_t>(it - traj.times.begin())];
            return (x - x0) / static_cast<double>(k);
        }
        case PathStatistic::min_over_path:
            return *std::min_element(traj.values.begin(), traj.values.end());
    }
    throw DomainError("UnknownStatistic");
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "time,x,regime\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        os << fmt_real(traj.times[i]) << ',' << fmt_real(traj.values[i]) << ',' << to_string(traj.regimes[i]) << '\n';
}

}  // namespace switchdiff
