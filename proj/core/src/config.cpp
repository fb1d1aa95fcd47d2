#include "pns/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pns/error.hpp"
#include "pns/format.hpp"

namespace pns {
namespace {

using K = KeyKind;

const std::map<std::string, std::string>& aliases() {
    static const std::map<std::string, std::string> a{{"grid.N", "grid.n_modes"}, {"grid.L", "grid.box_length"}};
    return a;
}

const KeySpec& spec_for(const std::string& key) {
    for (const auto& s : config_schema())
        if (s.key == key) return s;
    fail(ErrorKind::Validation, "unknown key '" + key + "'");
}

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
    fail(ErrorKind::Validation, key + ": " + why);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_real(const std::string& s, double& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end && std::isfinite(out);
}

bool parse_long(const std::string& s, long& out) {
    const char* b = s.data();
    if (!s.empty() && s[0] == '+') ++b;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, end, out);
    return ec == std::errc() && p == end && b != end;
}

void check_value(const KeySpec& spec, const std::string& v) {
    double d;
    long l;
    switch (spec.kind) {
        case K::real:
            if (!parse_real(v, d)) invalid(spec.key, "expected a finite real number, got '" + v + "'");
            break;
        case K::integer:
            if (!parse_long(v, l)) invalid(spec.key, "expected an integer, got '" + v + "'");
            break;
        case K::boolean:
            if (v != "true" && v != "false") invalid(spec.key, "expected true or false, got '" + v + "'");
            break;
        case K::choice:
            if (std::find(spec.choices.begin(), spec.choices.end(), v) == spec.choices.end()) {
                std::string list;
                for (const auto& c : spec.choices) list += (list.empty() ? "" : ", ") + c;
                invalid(spec.key, "expected one of {" + list + "}, got '" + v + "'");
            }
            break;
        case K::integer_list: {
            std::stringstream ss(v);
            std::string item;
            int count = 0;
            while (std::getline(ss, item, ',')) {
                if (!parse_long(trim(item), l)) invalid(spec.key, "expected comma-separated integers, got '" + v + "'");
                ++count;
            }
            if (count == 0) invalid(spec.key, "expected at least one integer");
            break;
        }
        case K::text:
            if (v.empty()) invalid(spec.key, "must not be empty");
            break;
    }
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

// Module preconditions, reported against the key that carries the value.
void validate(const RunConfig& c) {
    auto guard = [](const std::string& key, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Validation) throw;
            invalid(key, e.what());
        }
    };
    const long n = c.integer("grid.n_modes");
    if (n < 4 || n % 2 != 0) invalid("grid.n_modes", "must be an even integer >= 4, got " + std::to_string(n));
    guard("grid.box_length", [&] { c.grid(); });
    if (c.real("flow.rho") <= 0) invalid("flow.rho", "must be positive");
    if (c.real("flow.mu") <= 0) invalid("flow.mu", "must be positive");
    if (c.real("flow.delta") <= 0) invalid("flow.delta", "must be positive");
    if (c.real("flow.eta") <= 0) invalid("flow.eta", "must be positive");
    if (c.real("f4.c4") <= 0) invalid("f4.c4", "must be positive");
    if (c.real("f4.C1") <= 0) invalid("f4.C1", "must be positive");
    if (std::abs(c.integer("f4.branch")) != 1) invalid("f4.branch", "must be 1 or -1");
    guard("logistic.A2", [&] { c.logistic().validate(); });
    if (c.real("lattice.n") <= 0) invalid("lattice.n", "must be positive");
    if (c.real("wave.c") <= 0) invalid("wave.c", "must be positive");
    if (c.integer("wave.samples") < 1) invalid("wave.samples", "must be at least 1");
    if (c.real("wave.tolerance") <= 0) invalid("wave.tolerance", "must be positive");
    if (c.real("solver.dt") <= 0) invalid("solver.dt", "must be positive");
    if (c.real("solver.t_end") < 0) invalid("solver.t_end", "must be non-negative");
    {
        const double steps = c.real("solver.t_end") / c.real("solver.dt");
        if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
            invalid("solver.t_end", "must be a whole number of solver.dt steps");
    }
    if (c.integer("solver.sample_every") < 1) invalid("solver.sample_every", "must be at least 1");
    if (c.integer("solver.snapshot_every") < 0) invalid("solver.snapshot_every", "must be non-negative");
    if (c.real("solver.cfl") <= 0) invalid("solver.cfl", "must be positive");
    if (c.real("solver.vorticity_ceiling") <= 0) invalid("solver.vorticity_ceiling", "must be positive");
    if (c.real("family.amplitude") < 0) invalid("family.amplitude", "must be non-negative");
    const long jmin = c.integer("blowup.j_min"), jmax = c.integer("blowup.j_max");
    if (jmin < 2 || jmin >= jmax) invalid("blowup.j_min", "need 2 <= j_min < j_max");
    if (jmax > 12) invalid("blowup.j_max", "must be at most 12");
    for (int m : c.integer_list("blowup.orders"))
        if (m < 0 || m > 4) invalid("blowup.orders", "orders must lie in 0..4");
    if (c.integer("blowup.points_before") < 2) invalid("blowup.points_before", "must be at least 2");
    if (c.integer("blowup.points_after") < 0) invalid("blowup.points_after", "must be non-negative");
    if (c.real("blowup.t_max_factor") <= 1) invalid("blowup.t_max_factor", "must exceed 1");
    const double frac = c.real("blowup.ode_stop_frac");
    if (frac < 0 || frac >= 1) invalid("blowup.ode_stop_frac", "must lie in [0, 1)");
    const double p = c.real("inequality.p");
    const long dim = c.integer("inequality.n");
    if (dim < 2) invalid("inequality.n", "must be at least 2");
    if (p < 1 || p >= dim) invalid("inequality.p", "must satisfy 1 <= p < inequality.n");
    if (c.integer("inequality.nodes") < 4) invalid("inequality.nodes", "must be at least 4");
    if (c.integer("inequality.refine_nodes") <= c.integer("inequality.nodes"))
        invalid("inequality.refine_nodes", "must exceed inequality.nodes");
    if (c.integer("inequality.bumps") < 1) invalid("inequality.bumps", "must be at least 1");
    if (c.integer("residual.rule_nodes") < 2) invalid("residual.rule_nodes", "must be at least 2");
    if (c.integer("run.jobs") < 1) invalid("run.jobs", "must be at least 1");
    if (c.integer("run.seed") < 0) invalid("run.seed", "must be non-negative");
}

}  // namespace

const std::vector<KeySpec>& config_schema() {
    static const std::vector<KeySpec> schema{
        {"experiment.name", K::text, "experiment", {}, "label copied into the manifest"},
        {"output.dir", K::text, "out", {}, "output directory (--out wins)"},
        {"run.seed", K::integer, "1", {}, "seed for random test fields (--seed wins)"},
        {"run.jobs", K::integer, "1", {}, "worker threads for independent experiments (--jobs wins)"},
        {"grid.n_modes", K::integer, "32", {}, "modes per axis, even, >= 4"},
        {"grid.box_length", K::real, "1", {}, "box is [0, 2 pi L)^3"},
        {"flow.rho", K::real, "", {}, "density (required)"},
        {"flow.mu", K::real, "", {}, "dynamic viscosity (required)"},
        {"flow.delta", K::real, "1", {}, "rescaling parameter"},
        {"flow.eta", K::real, "1", {}, "u_z scaling"},
        {"family.velocity", K::choice, "taylor_green", {"taylor_green", "random", "lattice"}, "velocity family"},
        {"family.amplitude", K::real, "0.3", {}, "amplitude of random velocity fields"},
        {"f4.c4", K::real, "1", {}, "F4 constant"},
        {"f4.C1", K::real, "1", {}, "F4 blowup time"},
        {"f4.branch", K::integer, "1", {}, "sign branch, 1 or -1"},
        {"logistic.A", K::real, "-1", {}, "logistic A"},
        {"logistic.A2", K::real, "1", {}, "logistic A2"},
        {"logistic.C1", K::real, "1", {}, "logistic C1"},
        {"logistic.epsilon", K::real, "0.1", {}, "logistic epsilon in A1 = -2A/C1 - epsilon"},
        {"lattice.n", K::real, "1", {}, "lattice cell scale"},
        {"residual.t", K::real, "0.3", {}, "evaluation time"},
        {"residual.tolerance", K::real, "1e-10", {}, "pass threshold for manufactured residuals"},
        {"residual.rule_nodes", K::integer, "48", {}, "Gauss-Legendre nodes per axis for the lattice family"},
        {"solver.dt", K::real, "1e-3", {}, "time step"},
        {"solver.t_end", K::real, "1", {}, "final time"},
        {"solver.sample_every", K::integer, "100", {}, "diagnostic interval in steps"},
        {"solver.snapshot_every", K::integer, "0", {}, "PNSF1 snapshot interval in steps, 0 for none"},
        {"solver.cfl", K::real, "1", {}, "CFL limit"},
        {"solver.vorticity_ceiling", K::real, "1e8", {}, "halt threshold for max vorticity"},
        {"solver.energy_tolerance", K::real, "1e-6", {}, "Taylor-Green energy decay tolerance"},
        {"blowup.orders", K::integer_list, "0,1,2,3", {}, "derivative orders for the curve table"},
        {"blowup.j_min", K::integer, "2", {}, "smallest offset exponent"},
        {"blowup.j_max", K::integer, "8", {}, "largest offset exponent"},
        {"blowup.tolerance", K::real, "0.02", {}, "relative slope tolerance"},
        {"blowup.points_before", K::integer, "65", {}, "curve points on [0, C1)"},
        {"blowup.points_after", K::integer, "16", {}, "curve points on (C1, t_max]"},
        {"blowup.t_max_factor", K::real, "1.5", {}, "t_max = factor * C1"},
        {"blowup.ode_stop_frac", K::real, "0.9", {}, "ODE crosscheck stops at frac * C1"},
        {"inequality.p", K::real, "2", {}, "exponent"},
        {"inequality.n", K::integer, "3", {}, "dimension in the constant p/(n-p)"},
        {"inequality.nodes", K::integer, "64", {}, "quadrature resolution"},
        {"inequality.refine_nodes", K::integer, "96", {}, "refined resolution for the stability check"},
        {"inequality.refine_tolerance", K::real, "1e-5", {}, "relative refinement tolerance"},
        {"inequality.bumps", K::integer, "5", {}, "number of bump functions"},
        {"wave.c", K::real, "1", {}, "wave-speed parameter"},
        {"wave.form", K::choice, "c2_laplacian", {"c2_laplacian", "c_time"}, "placement of c in the first auxiliary equation"},
        {"wave.direction", K::choice, "y", {"x", "y", "z"}, "velocity component"},
        {"wave.samples", K::integer, "50", {}, "random sample points"},
        {"wave.tolerance", K::real, "1e-8", {}, "implication tolerance"},
        {"dump.family", K::choice, "taylor_green", {"taylor_green", "lattice", "f4_separable", "bump"}, "fields to dump"},
        {"dump.t", K::real, "0", {}, "dump time"},
    };
    return schema;
}

std::string suggest_key(std::string_view unknown) {
    std::string best;
    std::size_t best_d = std::string::npos;
    auto consider = [&](const std::string& k) {
        const std::size_t d = edit_distance(unknown, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    };
    for (const auto& s : config_schema()) consider(s.key);
    for (const auto& [alias, key] : aliases()) consider(alias);
    return best;
}

std::map<std::string, std::string> parse_settings(std::string_view text, const std::string& origin) {
    std::map<std::string, std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) fail(ErrorKind::Validation, where + ": expected key = value");
        std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (auto a = aliases().find(key); a != aliases().end()) key = a->second;
        const bool known = std::any_of(config_schema().begin(), config_schema().end(),
                                       [&](const KeySpec& s) { return s.key == key; });
        if (!known)
            fail(ErrorKind::Validation,
                 where + ": unknown key '" + key + "'; did you mean '" + suggest_key(key) + "'?");
        if (out.count(key)) fail(ErrorKind::Validation, where + ": duplicate key '" + key + "'");
        check_value(spec_for(key), value);
        out[key] = value;
    }
    return out;
}

RunConfig build_config(const std::map<std::string, std::string>& raw, const std::string& origin) {
    RunConfig c;
    for (const auto& s : config_schema()) {
        auto it = raw.find(s.key);
        if (it != raw.end())
            c.values_[s.key] = it->second;
        else if (!s.default_value.empty())
            c.values_[s.key] = s.default_value;
        else
            fail(ErrorKind::Validation, origin + ": " + s.key + ": required key is missing");
    }
    validate(c);
    return c;
}

namespace {

RunConfig with_overrides(std::map<std::string, std::string> raw, const std::vector<std::string>& overrides,
                         const std::string& origin) {
    for (const auto& o : overrides) {
        auto more = parse_settings(o, "--set");
        for (auto& [k, v] : more) raw[k] = v;
    }
    return build_config(raw, origin);
}

}  // namespace

RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return with_overrides(parse_settings(ss.str(), path.string()), overrides, path.string());
}

RunConfig parse_config_text(std::string_view text, const std::vector<std::string>& overrides) {
    return with_overrides(parse_settings(text, "<text>"), overrides, "<text>");
}

const std::string& RunConfig::text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) fail(ErrorKind::Validation, "unknown key '" + key + "'");
    return it->second;
}

double RunConfig::real(const std::string& key) const {
    double d = 0;
    if (!parse_real(text(key), d)) invalid(key, "expected a real number");
    return d;
}

long RunConfig::integer(const std::string& key) const {
    long l = 0;
    if (!parse_long(text(key), l)) invalid(key, "expected an integer");
    return l;
}

bool RunConfig::boolean(const std::string& key) const { return text(key) == "true"; }

std::vector<int> RunConfig::integer_list(const std::string& key) const {
    std::vector<int> out;
    std::stringstream ss(text(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        long l = 0;
        parse_long(trim(item), l);
        out.push_back(static_cast<int>(l));
    }
    return out;
}

SpectralGrid RunConfig::grid() const {
    return make_grid(static_cast<int>(integer("grid.n_modes")), real("grid.box_length"));
}

FlowParams RunConfig::flow() const {
    FlowParams p;
    p.rho = real("flow.rho");
    p.mu = real("flow.mu");
    p.delta = real("flow.delta");
    p.eta = real("flow.eta");
    return p;
}

F4Params RunConfig::f4() const {
    return {real("f4.c4"), real("f4.C1"), static_cast<int>(integer("f4.branch"))};
}

LogisticParams RunConfig::logistic() const {
    LogisticParams p;
    p.A = real("logistic.A");
    p.A2 = real("logistic.A2");
    p.C1 = real("logistic.C1");
    p.epsilon = real("logistic.epsilon");
    p.A1 = -2.0 * p.A / p.C1 - p.epsilon;
    return p;
}

WaveParams RunConfig::wave() const {
    return {real("wave.c"), text("wave.form") == "c_time" ? L3Form::c_time : L3Form::c2_laplacian};
}

SolverOptions RunConfig::solver_options() const {
    SolverOptions o;
    o.cfl_limit = real("solver.cfl");
    o.vorticity_ceiling = real("solver.vorticity_ceiling");
    o.sample_every = static_cast<int>(integer("solver.sample_every"));
    return o;
}

std::string RunConfig::canonical_text() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

}  // namespace pns
