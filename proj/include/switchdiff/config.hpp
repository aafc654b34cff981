#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "switchdiff/analytics.hpp"
#include "switchdiff/model.hpp"
#include "switchdiff/path.hpp"

namespace switchdiff {

enum class Command { check, skeleton, simulate, verify_mgf, verify_lln, chernoff, escape_rate, verify_lemma2, verify_tail };

/// CLI spelling: "verify-mgf", "escape-rate", ...
const char* to_string(Command c);
Command command_from_string(const std::string& s);

enum class ReportFormat { csv, json };

const char* to_string(ReportFormat f);
ReportFormat report_format_from_string(const std::string& s);

/// Numeric knobs of every command. Each command reads only its own subset;
/// the defaults reproduce the standard campaigns.
struct RunParams {
    // skeleton
    std::size_t n_cycles = 10;
    // simulate, escape-rate, verify-lemma2, verify-tail
    double horizon = 10.0;
    Integrator integrator = Integrator::exact;
    double dt = 0.01;
    // verify-mgf
    std::vector<double> lambdas{0.0, 0.05, 0.1, 0.2};
    std::vector<std::size_t> ns{1, 3, 5};
    bool include_excess = true;
    // shared sample count (chernoff: 0 means analytic only)
    std::size_t samples = 100000;
    // verify-lln
    std::size_t n = 1000000;
    double tolerance = 0.01;
    std::size_t repeats = 1;
    // chernoff
    TailDirection direction = TailDirection::lower_tail;
    double epsilon = 0.5;
    double lambda_cap = 1e3;
    // verify-lemma2
    double lambda = 0.05;
    double a_hat = 0.0;
    std::size_t cycles = 20;
    double slack = 0.05;
    // verify-tail
    double c0 = 0.0;
    std::vector<double> horizons{50.0, 100.0, 200.0, 400.0};

    friend bool operator==(const RunParams&, const RunParams&) = default;
};

struct OutputSpec {
    std::string dir = "switchdiff-out";
    ReportFormat format = ReportFormat::csv;

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunSpec {
    ModelSpec model;
    ProbeGrid probe;
    Command command = Command::check;
    RunParams params;
    std::uint64_t seed = 20240101;
    OutputSpec output;
    int threads = 0;

    friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

/// Parses and fully validates a JSON run configuration.
///
/// Top-level keys: model, command, params, seed, output {dir, format}, threads,
/// validation {probe_points, probe_half_width}. Unknown keys anywhere are rejected
/// (ParseError naming the key); syntax errors give a ParseError with the line.
/// Missing or out-of-range fields are collected into one ValidationError.
/// `command` may be omitted when `fallback_command` is supplied.
RunSpec parse_config(const std::string& text, const Command* fallback_command = nullptr);

/// JSON document that parse_config maps back to an equal RunSpec.
/// Throws DomainError for models holding a custom (callable) drift.
std::string serialize(const RunSpec& spec);

/// Range checks of the parameters the command will read.
std::vector<Violation> check_params(const RunSpec& spec);

}  // namespace switchdiff
