#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "switchdiff/config.hpp"
#include "switchdiff/run.hpp"

using namespace switchdiff;

namespace {

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo verification of two-regime switching diffusions"};
    app.set_version_flag("--version", std::string(version()));

    std::string command_name;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    std::optional<int> threads;

    app.add_option("command", command_name,
                   "check | skeleton | simulate | verify-mgf | verify-lln | chernoff | escape-rate | "
                   "verify-lemma2 | verify-tail")
        ->required();
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--seed", seed, "master seed (env SWITCHDIFF_SEED)");
    app.add_option("--out", out_dir, "output directory (env SWITCHDIFF_OUT)");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads, 0 = OpenMP default")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    RunSpec spec;
    try {
        const Command command = command_from_string(command_name);
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read " << config_path << '\n';
            return kExitConfig;
        }
        std::ostringstream text;
        text << in.rdbuf();
        spec = parse_config(text.str(), &command);

        if (const auto s = env("SWITCHDIFF_SEED")) {
            std::size_t used = 0;
            spec.seed = std::stoull(*s, &used);
            if (used != s->size()) throw std::invalid_argument(*s);
        }
        if (const auto o = env("SWITCHDIFF_OUT")) spec.output.dir = *o;
        if (seed) spec.seed = *seed;
        if (out_dir) spec.output.dir = *out_dir;
        if (format) spec.output.format = report_format_from_string(*format);
        if (threads) spec.threads = *threads;
    } catch (const ParseError& e) {
        std::cerr << "error: " << config_path;
        if (e.line() > 0) std::cerr << ':' << e.line();
        std::cerr << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::logic_error&) {
        std::cerr << "error: SWITCHDIFF_SEED must be a non-negative integer\n";
        return kExitConfig;
    }

    return run(spec, std::cout, std::cerr);
}
