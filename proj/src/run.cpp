#include "switchdiff/run.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "json.hpp"
#include "switchdiff/format.hpp"

#ifndef SWITCHDIFF_VERSION
#define SWITCHDIFF_VERSION "0.0.0"
#endif

namespace switchdiff {

const char* version() { return SWITCHDIFF_VERSION; }

namespace {

BoundReport info_row(std::string quantity, double analytic, double observed, std::string note) {
    BoundReport r;
    r.quantity = std::move(quantity);
    r.analytic = analytic;
    r.estimate.mean = observed;
    r.estimate.std_error = std::numeric_limits<double>::quiet_NaN();
    r.estimate.ci_low = r.estimate.ci_high = std::numeric_limits<double>::quiet_NaN();
    r.estimate.n_samples = std::isnan(observed) ? 0 : 1;
    r.z_score = std::numeric_limits<double>::quiet_NaN();
    r.verdict = Verdict::inconclusive;
    r.note = std::move(note);
    return r;
}

SimConfig sim_config(const RunParams& p) { return {p.integrator, p.dt}; }

}  // namespace

RunResult execute(const RunSpec& spec, const ValidatedModel& model, std::ostream& out) {
    const auto& p = spec.params;
    const McConfig mc{spec.threads, 0.999, false};
    const auto constants = analytic_constants(model);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    RunResult result;

    switch (spec.command) {
        case Command::check: {
            char line[96];
            std::snprintf(line, sizeof line, "transient: %s, velocity_star: %.6f", constants.transient ? "true" : "false",
                          constants.velocity_star);
            out << line << '\n';
            result.rows.push_back(info_row("mean_cycle", constants.mean_cycle, nan, "analytic only"));
            result.rows.push_back(info_row("velocity_star", constants.velocity_star, nan,
                                           constants.velocity_is_exact ? "exact long-run velocity"
                                                                       : "lower-bound heuristic"));
            result.rows.push_back(info_row("c1_max", constants.c1_max, nan, "analytic only"));
            break;
        }
        case Command::skeleton: {
            Stream rng(spec.seed, 0);
            auto sk = sample_skeleton(model, p.n_cycles, rng);
            result.rows.push_back(info_row("cycle_mean[n=" + std::to_string(p.n_cycles) + "]", constants.mean_cycle,
                                           cycle_statistic(sk), "single skeleton; see skeleton.csv"));
            result.skeleton = std::move(sk);
            break;
        }
        case Command::simulate: {
            Stream rng(spec.seed, 0);
            const auto sk = sample_skeleton_until(model, p.horizon, rng);
            auto traj = p.integrator == Integrator::exact ? simulate_exact_constant(model, sk, p.horizon, rng)
                                                          : simulate_em(model, sk, p.dt, p.horizon, rng);
            const double analytic = model.constant_drifts() ? constant_drift_velocity(model) : nan;
            result.rows.push_back(info_row("velocity[t=" + fmt_real(p.horizon) + "]", analytic,
                                           statistic_at(traj, PathStatistic::velocity_at_horizon),
                                           "single path; see trajectory.csv"));
            result.trajectory = std::move(traj);
            break;
        }
        case Command::verify_mgf:
            result.rows = verify_mgf(model, p.lambdas, p.ns, p.samples, spec.seed, mc, p.include_excess);
            break;
        case Command::verify_lln:
            result.rows = verify_lln(model, p.n, p.tolerance, p.repeats, spec.seed);
            break;
        case Command::chernoff:
            result.rows = verify_chernoff(model, p.direction, p.epsilon, p.ns, p.samples, spec.seed, p.lambda_cap, mc);
            break;
        case Command::escape_rate:
            result.rows.push_back(verify_velocity(model, p.horizon, p.samples, spec.seed, sim_config(p), mc));
            break;
        case Command::verify_lemma2:
            result.rows.push_back(
                verify_lemma2(model, p.lambda, p.a_hat, p.cycles, p.samples, spec.seed, p.slack, sim_config(p), mc));
            break;
        case Command::verify_tail: {
            auto tail = verify_spatial_tail(model, p.c0, p.epsilon, p.horizons, p.samples, spec.seed, sim_config(p), mc);
            result.rows = std::move(tail.rows);
            break;
        }
    }
    return result;
}

void write_report_csv(std::ostream& os, const std::vector<BoundReport>& rows) {
    os << "quantity,analytic,estimate,se,ci_low,ci_high,z,verdict\n";
    for (const auto& r : rows) {
        os << r.quantity << ',' << fmt_real(r.analytic) << ',' << fmt_real(r.estimate.mean) << ','
           << fmt_real(r.estimate.std_error) << ',' << fmt_real(r.estimate.ci_low) << ','
           << fmt_real(r.estimate.ci_high) << ',' << fmt_real(r.z_score) << ',' << to_string(r.verdict) << '\n';
    }
}

namespace {

nlohmann::json real_json(double v) {
    if (std::isfinite(v)) return v;
    return fmt_real(v);
}

}  // namespace

void write_report_json(std::ostream& os, const std::vector<BoundReport>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({
            {"quantity", r.quantity},
            {"analytic", real_json(r.analytic)},
            {"estimate", real_json(r.estimate.mean)},
            {"se", real_json(r.estimate.std_error)},
            {"ci_low", real_json(r.estimate.ci_low)},
            {"ci_high", real_json(r.estimate.ci_high)},
            {"z", real_json(r.z_score)},
            {"verdict", to_string(r.verdict)},
            {"n_samples", r.estimate.n_samples},
            {"kind", to_string(r.estimate.kind)},
            {"note", r.note},
        });
    }
    os << nlohmann::json{{"rows", arr}}.dump(2) << '\n';
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    std::optional<ValidatedModel> model;
    try {
        model.emplace(validate(spec.model, spec.probe));
        const auto violations = check_params(spec);
        if (!violations.empty()) throw ValidationError(violations);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    RunResult result;
    try {
        result = execute(spec, *model, out);
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const SimulationError& e) {
        err << "simulation error: " << e.what() << '\n';
        return kExitDomain;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool violated = false;
    for (const auto& r : result.rows) violated = violated || r.verdict == Verdict::bound_violated;
    const int code = violated ? kExitBoundViolated : kExitOk;

    namespace fs = std::filesystem;
    const fs::path dir(spec.output.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        err << "error: cannot create output directory " << dir << ": " << ec.message() << '\n';
        return kExitConfig;
    }
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw Error(std::string("cannot write ") + (dir / name).string());
        return f;
    };
    try {
        if (spec.output.format == ReportFormat::csv) {
            auto f = open("report.csv");
            write_report_csv(f, result.rows);
        } else {
            auto f = open("report.json");
            write_report_json(f, result.rows);
        }
        if (result.skeleton) {
            auto f = open("skeleton.csv");
            write_skeleton_csv(f, *result.skeleton);
        }
        if (result.trajectory) {
            auto f = open("trajectory.csv");
            write_trajectory_csv(f, *result.trajectory);
        }
        const auto c = analytic_constants(*model);
        const nlohmann::json meta{
            {"seed", spec.seed},
            {"version", version()},
            {"wall_time_s", wall},
            {"command", to_string(spec.command)},
            {"threads", spec.threads},
            {"exit_code", code},
            {"analytic",
             {{"mean_cycle", c.mean_cycle},
              {"velocity_star", c.velocity_star},
              {"c1_max", c.c1_max},
              {"transient", c.transient}}},
        };
        auto f = open("meta.json");
        f << meta.dump(2) << '\n';
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    if (violated) err << "bound_violated in at least one report row\n";
    return code;
}

}  // namespace switchdiff
