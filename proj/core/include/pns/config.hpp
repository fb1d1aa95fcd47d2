#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pns/blowup.hpp"
#include "pns/closed_form.hpp"
#include "pns/flow.hpp"
#include "pns/grid.hpp"
#include "pns/solver.hpp"
#include "pns/wave.hpp"

namespace pns {

enum class KeyKind { integer, real, text, choice, boolean, integer_list };

struct KeySpec {
    std::string key;
    KeyKind kind;
    std::string default_value;  // empty: required
    std::vector<std::string> choices;
    std::string help;
};

/// Every accepted key, in documentation order.
const std::vector<KeySpec>& config_schema();

/// Validated `key = value` settings. Holds every schema key after defaults are applied.
class RunConfig {
public:
    const std::map<std::string, std::string>& values() const noexcept { return values_; }

    const std::string& text(const std::string& key) const;
    double real(const std::string& key) const;
    long integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    std::vector<int> integer_list(const std::string& key) const;

    SpectralGrid grid() const;
    FlowParams flow() const;
    F4Params f4() const;
    LogisticParams logistic() const;
    WaveParams wave() const;
    SolverOptions solver_options() const;
    std::string experiment() const { return text("experiment.name"); }
    std::filesystem::path output_dir() const { return text("output.dir"); }
    std::uint64_t seed() const { return static_cast<std::uint64_t>(integer("run.seed")); }

    /// The config as sorted `key = value` lines.
    std::string canonical_text() const;

private:
    friend RunConfig build_config(const std::map<std::string, std::string>& raw, const std::string& origin);
    std::map<std::string, std::string> values_;
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys raise Validation with
/// the closest known key; invalid values raise Validation naming the key.
std::map<std::string, std::string> parse_settings(std::string_view text, const std::string& origin);

/// Applies defaults and validates; overrides are `key=value` and win over the file.
RunConfig build_config(const std::map<std::string, std::string>& raw, const std::string& origin);

/// Missing or unreadable file raises Io.
RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
RunConfig parse_config_text(std::string_view text, const std::vector<std::string>& overrides = {});

/// Closest schema key (or alias) by edit distance.
std::string suggest_key(std::string_view unknown);

}  // namespace pns
