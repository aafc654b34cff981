#include "switchdiff/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace switchdiff {

using nlohmann::json;

namespace {

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::check, "check"},
    {Command::skeleton, "skeleton"},
    {Command::simulate, "simulate"},
    {Command::verify_mgf, "verify-mgf"},
    {Command::verify_lln, "verify-lln"},
    {Command::chernoff, "chernoff"},
    {Command::escape_rate, "escape-rate"},
    {Command::verify_lemma2, "verify-lemma2"},
    {Command::verify_tail, "verify-tail"},
};

}  // namespace

const char* to_string(Command c) {
    for (const auto& [k, name] : kCommands)
        if (k == c) return name;
    return "unknown";
}

Command command_from_string(const std::string& s) {
    for (const auto& [k, name] : kCommands)
        if (s == name) return k;
    throw ParseError("unknown command '" + s + "'", 0, "command");
}

const char* to_string(ReportFormat f) { return f == ReportFormat::csv ? "csv" : "json"; }

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw ParseError("unknown report format '" + s + "' (expected csv or json)", 0, "format");
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            std::string hint;
            if (key == "sigma" || key == "diffusion")
                hint = " (the diffusion coefficient is fixed at 1)";
            throw ParseError("unknown key '" + path + key + "'" + hint, 0, path + key);
        }
    }
}

// Collects every missing or malformed field before failing.
class Reader {
public:
    std::vector<Violation> violations;

    void missing(const std::string& field) {
        violations.push_back({ViolationCode::missing_field, field, "required field '" + field + "' is missing"});
    }
    void invalid(const std::string& field, const std::string& why) {
        violations.push_back({ViolationCode::invalid_parameter, field, field + ": " + why});
    }

    bool real(const json& obj, const char* key, const std::string& path, double& out, bool required = false) {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) missing(path + key);
            return false;
        }
        if (!it->is_number()) {
            invalid(path + key, "expected a number");
            return false;
        }
        out = it->get<double>();
        return true;
    }

    bool count(const json& obj, const char* key, const std::string& path, std::size_t& out) {
        const auto it = obj.find(key);
        if (it == obj.end()) return false;
        return as_count(*it, path + key, out);
    }

    bool as_count(const json& v, const std::string& field, std::size_t& out) {
        if (v.is_number_unsigned()) {
            out = v.get<std::size_t>();
            return true;
        }
        if (v.is_number()) {
            const double d = v.get<double>();
            if (d >= 0.0 && d <= 9007199254740992.0 && std::floor(d) == d) {
                out = static_cast<std::size_t>(d);
                return true;
            }
        }
        invalid(field, "expected a non-negative integer");
        return false;
    }

    bool string(const json& obj, const char* key, const std::string& path, std::string& out) {
        const auto it = obj.find(key);
        if (it == obj.end()) return false;
        if (!it->is_string()) {
            invalid(path + key, "expected a string");
            return false;
        }
        out = it->get<std::string>();
        return true;
    }

    void reals(const json& obj, const char* key, const std::string& path, std::vector<double>& out) {
        const auto it = obj.find(key);
        if (it == obj.end()) return;
        if (!it->is_array()) return invalid(path + key, "expected an array of numbers");
        std::vector<double> v;
        for (const auto& e : *it) {
            if (!e.is_number()) return invalid(path + key, "expected an array of numbers");
            v.push_back(e.get<double>());
        }
        out = std::move(v);
    }

    void counts(const json& obj, const char* key, const std::string& path, std::vector<std::size_t>& out) {
        const auto it = obj.find(key);
        if (it == obj.end()) return;
        if (!it->is_array()) return invalid(path + key, "expected an array of integers");
        std::vector<std::size_t> v;
        for (const auto& e : *it) {
            std::size_t c = 0;
            if (!as_count(e, path + key, c)) return;
            v.push_back(c);
        }
        out = std::move(v);
    }
};

bool read_drift(Reader& rd, const json& model, const char* key, Drift& out) {
    const std::string field = std::string("model.") + key;
    const auto it = model.find(key);
    if (it == model.end()) {
        rd.missing(field);
        return false;
    }
    if (it->is_number()) {
        out = ConstantDrift{it->get<double>()};
        return true;
    }
    if (!it->is_object()) {
        rd.invalid(field, "expected a number or an object with a 'type'");
        return false;
    }
    std::string type;
    if (!rd.string(*it, "type", field + ".", type)) {
        rd.missing(field + ".type");
        return false;
    }
    if (type == "constant") {
        reject_unknown(*it, {"type", "value"}, field + ".");
        ConstantDrift c;
        if (!rd.real(*it, "value", field + ".", c.value, true)) return false;
        out = c;
        return true;
    }
    if (type == "tanh") {
        reject_unknown(*it, {"type", "offset", "amplitude", "scale"}, field + ".");
        TanhDrift t;
        bool ok = rd.real(*it, "offset", field + ".", t.offset, true);
        ok = rd.real(*it, "amplitude", field + ".", t.amplitude, true) && ok;
        rd.real(*it, "scale", field + ".", t.scale);
        if (!ok) return false;
        out = t;
        return true;
    }
    rd.invalid(field + ".type", "unknown drift type '" + type + "' (expected constant or tanh)");
    return false;
}

void read_model(Reader& rd, const json& m, ModelSpec& spec) {
    reject_unknown(m, {"lambda_plus", "lambda_minus", "drift_plus", "drift_minus", "r_plus", "r_minus", "sup_b_plus",
                       "sup_b_minus", "x0", "z0"},
                   "model.");
    rd.real(m, "lambda_plus", "model.", spec.lambda_plus, true);
    rd.real(m, "lambda_minus", "model.", spec.lambda_minus, true);
    rd.real(m, "r_plus", "model.", spec.r_plus, true);
    rd.real(m, "r_minus", "model.", spec.r_minus, true);
    const bool dp = read_drift(rd, m, "drift_plus", spec.drift_plus);
    const bool dm = read_drift(rd, m, "drift_minus", spec.drift_minus);
    if (!rd.real(m, "sup_b_plus", "model.", spec.sup_b_plus) && dp)
        spec.sup_b_plus = std::max(natural_sup(spec.drift_plus), spec.r_plus);
    if (!rd.real(m, "sup_b_minus", "model.", spec.sup_b_minus) && dm)
        spec.sup_b_minus = std::max(natural_sup(spec.drift_minus), spec.r_minus);
    rd.real(m, "x0", "model.", spec.x0);
    std::string z0;
    if (rd.string(m, "z0", "model.", z0)) {
        if (z0 == "plus") spec.z0 = Regime::plus;
        else if (z0 == "minus") spec.z0 = Regime::minus;
        else rd.invalid("model.z0", "expected \"plus\" or \"minus\"");
    }
}

void read_params(Reader& rd, const json& p, RunParams& out) {
    reject_unknown(p, {"n_cycles", "horizon", "integrator", "dt", "lambdas", "ns", "include_excess", "samples", "n",
                       "tolerance", "repeats", "direction", "epsilon", "lambda_cap", "lambda", "a_hat", "cycles",
                       "slack", "c0", "horizons"},
                   "params.");
    const std::string pre = "params.";
    rd.count(p, "n_cycles", pre, out.n_cycles);
    rd.real(p, "horizon", pre, out.horizon);
    std::string s;
    if (rd.string(p, "integrator", pre, s)) {
        if (s == "exact") out.integrator = Integrator::exact;
        else if (s == "em") out.integrator = Integrator::euler_maruyama;
        else rd.invalid("params.integrator", "expected \"exact\" or \"em\"");
    }
    rd.real(p, "dt", pre, out.dt);
    rd.reals(p, "lambdas", pre, out.lambdas);
    rd.counts(p, "ns", pre, out.ns);
    if (const auto it = p.find("include_excess"); it != p.end()) {
        if (it->is_boolean()) out.include_excess = it->get<bool>();
        else rd.invalid("params.include_excess", "expected a boolean");
    }
    rd.count(p, "samples", pre, out.samples);
    rd.count(p, "n", pre, out.n);
    rd.real(p, "tolerance", pre, out.tolerance);
    rd.count(p, "repeats", pre, out.repeats);
    if (rd.string(p, "direction", pre, s)) {
        if (s == "lower_tail") out.direction = TailDirection::lower_tail;
        else if (s == "upper_tail") out.direction = TailDirection::upper_tail;
        else rd.invalid("params.direction", "expected \"lower_tail\" or \"upper_tail\"");
    }
    rd.real(p, "epsilon", pre, out.epsilon);
    rd.real(p, "lambda_cap", pre, out.lambda_cap);
    rd.real(p, "lambda", pre, out.lambda);
    rd.real(p, "a_hat", pre, out.a_hat);
    rd.count(p, "cycles", pre, out.cycles);
    rd.real(p, "slack", pre, out.slack);
    rd.real(p, "c0", pre, out.c0);
    rd.reals(p, "horizons", pre, out.horizons);
}

std::size_t line_of(const std::string& text, std::size_t byte) {
    const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
    return 1 + static_cast<std::size_t>(std::count(text.begin(), end, '\n'));
}

}  // namespace

std::vector<Violation> check_params(const RunSpec& spec) {
    std::vector<Violation> out;
    const auto& p = spec.params;
    auto bad = [&](const char* field, const std::string& why) {
        out.push_back({ViolationCode::invalid_parameter, std::string("params.") + field, std::string(field) + ": " + why});
    };
    auto positive = [&](const char* field, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) bad(field, "must be positive and finite");
    };
    auto mc_samples = [&](std::size_t min) {
        if (p.samples < min) bad("samples", "must be >= " + std::to_string(min));
    };
    auto sim = [&]() {
        if (p.integrator == Integrator::euler_maruyama) positive("dt", p.dt);
        if (p.integrator == Integrator::exact &&
            !(is_constant(spec.model.drift_plus) && is_constant(spec.model.drift_minus)))
            bad("integrator", "the exact sampler needs constant drifts; use \"em\"");
    };
    switch (spec.command) {
        case Command::check: break;
        case Command::skeleton:
            if (p.n_cycles < 1) bad("n_cycles", "must be >= 1");
            break;
        case Command::simulate:
            positive("horizon", p.horizon);
            sim();
            break;
        case Command::verify_mgf:
            mc_samples(2);
            if (p.lambdas.empty()) bad("lambdas", "must not be empty");
            for (const double l : p.lambdas)
                if (!(l >= 0.0) || !std::isfinite(l)) bad("lambdas", "entries must be finite and >= 0");
            if (p.ns.empty()) bad("ns", "must not be empty");
            for (const auto n : p.ns)
                if (n < 1) bad("ns", "entries must be >= 1");
            break;
        case Command::verify_lln:
            if (p.n < 1) bad("n", "must be >= 1");
            positive("tolerance", p.tolerance);
            if (p.repeats < 1) bad("repeats", "must be >= 1");
            break;
        case Command::chernoff:
            positive("epsilon", p.epsilon);
            positive("lambda_cap", p.lambda_cap);
            if (p.ns.empty()) bad("ns", "must not be empty");
            for (const auto n : p.ns)
                if (n < 1) bad("ns", "entries must be >= 1");
            if (p.samples == 1) bad("samples", "must be 0 (analytic only) or >= 2");
            break;
        case Command::escape_rate:
            positive("horizon", p.horizon);
            mc_samples(2);
            sim();
            if (!(is_constant(spec.model.drift_plus) && is_constant(spec.model.drift_minus)))
                bad("model", "escape-rate compares against the constant-drift velocity; drifts must be constant");
            break;
        case Command::verify_lemma2:
            if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) bad("lambda", "must be finite and >= 0");
            if (!(p.a_hat >= 0.0) || !std::isfinite(p.a_hat)) bad("a_hat", "must be finite and >= 0");
            if (p.cycles < 1) bad("cycles", "must be >= 1");
            if (!(p.slack >= 0.0)) bad("slack", "must be >= 0");
            mc_samples(2);
            sim();
            break;
        case Command::verify_tail:
            positive("epsilon", p.epsilon);
            if (!std::isfinite(p.c0)) bad("c0", "must be finite");
            if (p.horizons.size() < 3) bad("horizons", "need at least 3 horizons");
            for (const double t : p.horizons)
                if (!(t > 0.0) || !std::isfinite(t)) bad("horizons", "entries must be positive");
            mc_samples(2);
            sim();
            break;
    }
    return out;
}

RunSpec parse_config(const std::string& text, const Command* fallback_command) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed configuration: ") + e.what(), line_of(text, e.byte), "");
    }
    if (!doc.is_object()) throw ParseError("configuration must be a JSON object", 1, "");
    reject_unknown(doc, {"model", "command", "params", "seed", "output", "threads", "validation"}, "");

    RunSpec spec;
    Reader rd;

    if (const auto it = doc.find("command"); it != doc.end()) {
        if (!it->is_string()) throw ParseError("'command' must be a string", 0, "command");
        spec.command = command_from_string(it->get<std::string>());
        if (fallback_command && *fallback_command != spec.command)
            throw ParseError(std::string("configuration command '") + to_string(spec.command) +
                                 "' does not match the requested '" + to_string(*fallback_command) + "'",
                             0, "command");
    } else if (fallback_command) {
        spec.command = *fallback_command;
    } else {
        rd.missing("command");
    }

    if (const auto it = doc.find("model"); it != doc.end() && it->is_object()) {
        read_model(rd, *it, spec.model);
    } else if (it == doc.end()) {
        rd.missing("model");
    } else {
        rd.invalid("model", "expected an object");
    }

    if (const auto it = doc.find("params"); it != doc.end()) {
        if (it->is_object()) read_params(rd, *it, spec.params);
        else rd.invalid("params", "expected an object");
    }
    if (const auto it = doc.find("seed"); it != doc.end()) {
        std::size_t seed = 0;
        if (it->is_number_unsigned()) spec.seed = it->get<std::uint64_t>();
        else if (rd.as_count(*it, "seed", seed)) spec.seed = seed;
    }
    if (const auto it = doc.find("threads"); it != doc.end()) {
        std::size_t t = 0;
        if (rd.as_count(*it, "threads", t)) spec.threads = static_cast<int>(t);
    }
    if (const auto it = doc.find("output"); it != doc.end()) {
        if (!it->is_object()) {
            rd.invalid("output", "expected an object");
        } else {
            reject_unknown(*it, {"dir", "format"}, "output.");
            rd.string(*it, "dir", "output.", spec.output.dir);
            std::string f;
            if (rd.string(*it, "format", "output.", f)) spec.output.format = report_format_from_string(f);
        }
    }
    if (const auto it = doc.find("validation"); it != doc.end()) {
        if (!it->is_object()) {
            rd.invalid("validation", "expected an object");
        } else {
            reject_unknown(*it, {"probe_points", "probe_half_width"}, "validation.");
            rd.count(*it, "probe_points", "validation.", spec.probe.points);
            rd.real(*it, "probe_half_width", "validation.", spec.probe.half_width);
        }
    }

    auto violations = std::move(rd.violations);
    if (violations.empty()) {
        for (auto& v : check(spec.model, spec.probe)) violations.push_back(std::move(v));
        for (auto& v : check_params(spec)) violations.push_back(std::move(v));
    }
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return spec;
}

namespace {

json drift_json(const Drift& d) {
    if (const auto* c = std::get_if<ConstantDrift>(&d)) return {{"type", "constant"}, {"value", c->value}};
    if (const auto* t = std::get_if<TanhDrift>(&d))
        return {{"type", "tanh"}, {"offset", t->offset}, {"amplitude", t->amplitude}, {"scale", t->scale}};
    throw DomainError("custom drifts cannot be serialized");
}

}  // namespace

std::string serialize(const RunSpec& spec) {
    const auto& m = spec.model;
    const auto& p = spec.params;
    json doc;
    doc["command"] = to_string(spec.command);
    doc["model"] = {
        {"lambda_plus", m.lambda_plus}, {"lambda_minus", m.lambda_minus}, {"drift_plus", drift_json(m.drift_plus)},
        {"drift_minus", drift_json(m.drift_minus)}, {"r_plus", m.r_plus},   {"r_minus", m.r_minus},
        {"sup_b_plus", m.sup_b_plus},     {"sup_b_minus", m.sup_b_minus},   {"x0", m.x0},
        {"z0", to_string(m.z0)},
    };
    doc["params"] = {
        {"n_cycles", p.n_cycles},
        {"horizon", p.horizon},
        {"integrator", to_string(p.integrator)},
        {"dt", p.dt},
        {"lambdas", p.lambdas},
        {"ns", p.ns},
        {"include_excess", p.include_excess},
        {"samples", p.samples},
        {"n", p.n},
        {"tolerance", p.tolerance},
        {"repeats", p.repeats},
        {"direction", to_string(p.direction)},
        {"epsilon", p.epsilon},
        {"lambda_cap", p.lambda_cap},
        {"lambda", p.lambda},
        {"a_hat", p.a_hat},
        {"cycles", p.cycles},
        {"slack", p.slack},
        {"c0", p.c0},
        {"horizons", p.horizons},
    };
    doc["seed"] = spec.seed;
    doc["threads"] = spec.threads;
    doc["output"] = {{"dir", spec.output.dir}, {"format", to_string(spec.output.format)}};
    doc["validation"] = {{"probe_points", spec.probe.points}, {"probe_half_width", spec.probe.half_width}};
    return doc.dump(2) + "\n";
}

}  // namespace switchdiff
