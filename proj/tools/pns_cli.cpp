#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pns/config.hpp"
#include "pns/error.hpp"
#include "pns/experiments.hpp"
#include "pns/report_io.hpp"

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kInvalidInput = 2 };

using Pipeline = std::function<pns::ExperimentOutcome(const pns::RunConfig&, const std::filesystem::path&)>;

struct Invocation {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out;
    long seed = -1;
    long jobs = 0;
};

int exit_code(pns::ErrorKind kind) {
    using K = pns::ErrorKind;
    switch (kind) {
        case K::Validation:
        case K::InvalidArgument:
        case K::Io:
        case K::StepRejected:
        case K::InvalidRange:
        case K::InvalidExponent:
        case K::Precondition:
        case K::OutOfDomain:
            return kInvalidInput;
        default:
            return kCheckFailed;
    }
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("pns");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* level = std::getenv("PNS_LOG");
    spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

int execute(const std::string& name, const Pipeline& pipeline, const Invocation& inv) {
    std::vector<std::string> overrides = inv.sets;
    if (!inv.out.empty()) overrides.push_back("output.dir=" + inv.out);
    if (inv.seed >= 0) overrides.push_back("run.seed=" + std::to_string(inv.seed));
    if (inv.jobs > 0) overrides.push_back("run.jobs=" + std::to_string(inv.jobs));
    const pns::RunConfig config =
        inv.config_path.empty() ? pns::parse_config_text("", overrides) : pns::parse_config(inv.config_path, overrides);
    const std::filesystem::path dir = config.output_dir();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw pns::Error(pns::ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());

    pns::RunManifest manifest;
    manifest.version = pns::version();
    manifest.subcommand = name;
    manifest.experiment = config.experiment();
    manifest.config = config.values();
    manifest.started = pns::utc_timestamp();
    spdlog::info("{} -> {}", name, dir.string());

    const pns::ExperimentOutcome outcome = pipeline(config, dir);
    manifest.finished = pns::utc_timestamp();
    manifest.files = pns::checksum_files(dir, outcome.files);
    manifest.checks = outcome.checks;
    manifest.notes = outcome.notes;
    pns::write_manifest(dir / "manifest.json", manifest);

    for (const auto& c : outcome.checks) std::printf("%s %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    for (const auto& n : outcome.notes) spdlog::info("note: {}", n);
    return outcome.passed() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"periodic Navier-Stokes verification toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pns::version());

    Invocation inv;
    const std::map<std::string, std::pair<std::string, Pipeline>> commands{
        {"verify-residuals", {"manufactured-solution residuals", pns::verify_residuals}},
        {"run-dns", {"pseudo-spectral time integration", pns::run_dns}},
        {"blowup-report", {"F4 blowup tables, exponent fits and ODE cross-check", pns::blowup_report}},
        {"inequality-report", {"Hardy inequality and sandwich chain on bump functions", pns::inequality_report}},
        {"wave-check", {"auxiliary equations and the wave reduction", pns::wave_check}},
        {"dump-fields", {"write PNSF1 field files", pns::dump_fields}},
    };
    std::string selected;
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config,-c", inv.config_path, "key = value config file")->check(CLI::ExistingFile);
        sub->add_option("--set,-s", inv.sets, "override, key=value (repeatable)");
        sub->add_option("--out,-o", inv.out, "output directory");
        sub->add_option("--seed", inv.seed, "seed for random fields")->check(CLI::NonNegativeNumber);
        sub->add_option("--jobs,-j", inv.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->callback([&selected, name = name] { selected = name; });
    }
    auto* keys = app.add_subcommand("keys", "list config keys and defaults");
    keys->callback([&selected] { selected = "keys"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalidInput;
    }

    if (selected == "keys") {
        for (const auto& k : pns::config_schema())
            std::printf("%-28s %-14s %s\n", k.key.c_str(), k.default_value.empty() ? "(required)" : k.default_value.c_str(),
                        k.help.c_str());
        return kOk;
    }
    try {
        return execute(selected, commands.at(selected).second, inv);
    } catch (const pns::Error& e) {
        spdlog::error("{}: {}", pns::to_string(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kCheckFailed;
    }
}
