#include "phonon/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "phonon/output.hpp"
#include "phonon/parallel.hpp"

namespace phonon {

namespace {

enum class KeyType { integer, real, boolean, text };

struct KeySpec {
    const char* name;
    KeyType type;
    const char* choices;  // "a|b|c" for enumerated text keys, else nullptr
};

// Every key the configuration format accepts, in canonical emission order.
constexpr std::array<KeySpec, 35> kRegistry{{
    {"mode", KeyType::text, "derive|ground|quench|sweep"},
    {"sector.sites", KeyType::integer, nullptr},
    {"sector.phonons", KeyType::integer, nullptr},
    {"sector.dimension_cap", KeyType::integer, nullptr},
    {"couplings.j_over_u", KeyType::real, nullptr},
    {"couplings.j_hz", KeyType::real, nullptr},
    {"couplings.u_hz", KeyType::real, nullptr},
    {"couplings.from_trap", KeyType::boolean, nullptr},
    {"couplings.hopping_sign", KeyType::integer, nullptr},
    {"quench.site", KeyType::integer, nullptr},
    {"quench.measure_site", KeyType::integer, nullptr},
    {"quench.t_max_u", KeyType::real, nullptr},
    {"quench.samples", KeyType::integer, nullptr},
    {"quench.boundary", KeyType::text, "open|periodic"},
    {"quench.initial_state", KeyType::text, "ground|fock_unit_filling"},
    {"sweep.ju_min", KeyType::real, nullptr},
    {"sweep.ju_max", KeyType::real, nullptr},
    {"sweep.points", KeyType::integer, nullptr},
    {"sweep.spacing", KeyType::text, "log|linear"},
    {"trap.rf_drive_hz", KeyType::real, nullptr},
    {"trap.stability_q", KeyType::real, nullptr},
    {"trap.axial_freq_hz", KeyType::real, nullptr},
    {"trap.ion_spacing_m", KeyType::real, nullptr},
    {"trap.ion_mass_kg", KeyType::real, nullptr},
    {"trap.standing_wave_f_hz", KeyType::real, nullptr},
    {"trap.standing_wave_lambda_m", KeyType::real, nullptr},
    {"trap.delta_parity", KeyType::integer, nullptr},
    {"trap.quench_mod_freq_hz", KeyType::real, nullptr},
    {"detection.branching_f", KeyType::real, nullptr},
    {"detection.numerical_aperture", KeyType::real, nullptr},
    {"detection.solid_angle", KeyType::real, nullptr},
    {"detection.p_lifetime_s", KeyType::real, nullptr},
    {"detection.quantum_eff", KeyType::real, nullptr},
    {"detection.optics_loss", KeyType::real, nullptr},
    {"detection.gamma_convention", KeyType::text, "natural|angular"},
}};

const KeySpec* find_key(const std::string& name) {
    for (const KeySpec& spec : kRegistry) {
        if (name == spec.name) return &spec;
    }
    return nullptr;
}

// Keys outside the simulation registry handled by the runner itself.
constexpr std::array<const char*, 3> kRunnerKeys{"output.directory", "run.workers", "run.seed"};

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string nearest_key(const std::string& name) {
    std::string best;
    std::size_t best_distance = std::string::npos;
    auto consider = [&](const std::string& candidate) {
        const std::size_t d = edit_distance(name, candidate);
        if (d < best_distance) {
            best_distance = d;
            best = candidate;
        }
    };
    for (const KeySpec& spec : kRegistry) consider(spec.name);
    for (const char* key : kRunnerKeys) consider(key);
    return best;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

struct RawConfig {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream stream(text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_number) +
                              ": expected 'section.key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_number) +
                              ": expected 'section.key = value', got '" + line + "'");
        }
        const bool runner_key =
            std::find_if(kRunnerKeys.begin(), kRunnerKeys.end(),
                         [&](const char* k) { return key == k; }) != kRunnerKeys.end();
        if (find_key(key) == nullptr && !runner_key) {
            throw ConfigError("unknown key '" + key + "'; nearest valid key is '" +
                              nearest_key(key) + "'");
        }
        if (raw.values.count(key) > 0) {
            throw ConfigError("duplicate key '" + key + "'");
        }
        raw.values[key] = value;
    }
    return raw;
}

long parse_integer(const std::string& key, const std::string& value) {
    long out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto result = std::from_chars(begin, end, out);
    if (result.ec != std::errc() || result.ptr != end) {
        throw ConfigError("expected integer for " + key + ", got '" + value + "'");
    }
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto result = std::from_chars(begin, end, out);
    if (result.ec != std::errc() || result.ptr != end) {
        throw ConfigError("expected real for " + key + ", got '" + value + "'");
    }
    return out;
}

bool parse_boolean(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError("expected boolean (true|false) for " + key + ", got '" + value + "'");
}

std::string parse_choice(const std::string& key, const std::string& value) {
    const KeySpec* spec = find_key(key);
    if (spec != nullptr && spec->choices != nullptr) {
        std::string choices(spec->choices);
        std::size_t start = 0;
        while (start <= choices.size()) {
            const auto bar = choices.find('|', start);
            const std::string option = choices.substr(
                start, bar == std::string::npos ? std::string::npos : bar - start);
            if (value == option) return value;
            if (bar == std::string::npos) break;
            start = bar + 1;
        }
        throw ConfigError("expected one of (" + choices + ") for " + key + ", got '" + value +
                          "'");
    }
    return value;
}

// Reader tracking which values came from the user so defaults can be recorded.
class Resolver {
public:
    Resolver(const RawConfig& raw, RunConfig& config) : raw_(raw), config_(config) {}

    long integer(const std::string& key, long fallback) {
        if (!raw_.has(key)) {
            note_default(key, std::to_string(fallback));
            return fallback;
        }
        return parse_integer(key, raw_.values.at(key));
    }

    double real(const std::string& key, double fallback) {
        if (!raw_.has(key)) {
            note_default(key, format_number_exact(fallback));
            return fallback;
        }
        return parse_real(key, raw_.values.at(key));
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!raw_.has(key)) {
            note_default(key, fallback ? "true" : "false");
            return fallback;
        }
        return parse_boolean(key, raw_.values.at(key));
    }

    std::string choice(const std::string& key, const std::string& fallback) {
        if (!raw_.has(key)) {
            note_default(key, fallback);
            return fallback;
        }
        return parse_choice(key, raw_.values.at(key));
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!raw_.has(key)) {
            note_default(key, fallback);
            return fallback;
        }
        return raw_.values.at(key);
    }

    std::optional<double> optional_real(const std::string& key) {
        if (!raw_.has(key)) return std::nullopt;
        return parse_real(key, raw_.values.at(key));
    }

    bool user_set(const std::string& key) const { return raw_.has(key); }

    void note_default(const std::string& key, const std::string& value) {
        config_.resolved_defaults.emplace_back(key, value);
    }

private:
    const RawConfig& raw_;
    RunConfig& config_;
};

RunMode parse_mode_name(const std::string& name) {
    if (name == "derive") return RunMode::derive;
    if (name == "ground") return RunMode::ground;
    if (name == "quench") return RunMode::quench;
    if (name == "sweep") return RunMode::sweep;
    throw ConfigError("expected one of (derive|ground|quench|sweep) for mode, got '" + name + "'");
}

}  // namespace

const char* to_string(RunMode mode) {
    switch (mode) {
        case RunMode::derive: return "derive";
        case RunMode::ground: return "ground";
        case RunMode::quench: return "quench";
        case RunMode::sweep: return "sweep";
    }
    return "?";
}

std::vector<double> SweepSettings::grid() const {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        values.push_back(ju_min);
        return values;
    }
    if (log_spacing) {
        const double step = (std::log(ju_max) - std::log(ju_min)) / (points - 1);
        for (int i = 0; i < points; ++i) {
            values.push_back(std::exp(std::log(ju_min) + i * step));
        }
    } else {
        const double step = (ju_max - ju_min) / (points - 1);
        for (int i = 0; i < points; ++i) values.push_back(ju_min + i * step);
    }
    values.back() = ju_max;  // pin the endpoint against rounding
    return values;
}

double RunConfig::resolved_j_over_u() const {
    switch (route) {
        case CouplingRoute::ratio:
            return j_over_u;
        case CouplingRoute::physical:
            return j_hz / u_hz;
        case CouplingRoute::trap: {
            const DerivedCouplings derived = derive_couplings(trap);
            return derived.hopping_hz / std::abs(derived.onsite_u_hz);
        }
        case CouplingRoute::none:
            break;
    }
    throw ConfigError("no coupling route configured");
}

std::optional<double> RunConfig::physical_u_hz() const {
    switch (route) {
        case CouplingRoute::physical:
            return u_hz;
        case CouplingRoute::trap:
            return std::abs(derive_couplings(trap).onsite_u_hz);
        default:
            return std::nullopt;
    }
}

std::string default_output_directory() {
    const char* env = std::getenv(output_dir_env_var);
    return (env != nullptr && env[0] != '\0') ? env : ".";
}

std::string RunConfig::to_config_text() const {
    std::vector<std::pair<std::string, std::string>> entries;
    entries.emplace_back("mode", to_string(mode));
    entries.emplace_back("sector.sites", std::to_string(sites));
    entries.emplace_back("sector.phonons", std::to_string(phonons));
    entries.emplace_back("sector.dimension_cap", std::to_string(dimension_cap));
    if (route == CouplingRoute::ratio) {
        entries.emplace_back("couplings.j_over_u", format_number_exact(j_over_u));
    } else if (route == CouplingRoute::physical) {
        entries.emplace_back("couplings.j_hz", format_number_exact(j_hz));
        entries.emplace_back("couplings.u_hz", format_number_exact(u_hz));
    }
    entries.emplace_back("couplings.from_trap", route == CouplingRoute::trap ? "true" : "false");
    entries.emplace_back("couplings.hopping_sign", std::to_string(hopping_sign));
    entries.emplace_back("quench.site", std::to_string(quench.site));
    entries.emplace_back("quench.measure_site", std::to_string(quench.measure_site));
    entries.emplace_back("quench.t_max_u", format_number_exact(quench.t_max_u));
    entries.emplace_back("quench.samples", std::to_string(quench.samples));
    entries.emplace_back("quench.boundary",
                         quench.boundary == Boundary::open ? "open" : "periodic");
    entries.emplace_back("quench.initial_state",
                         quench.initial_state == InitialState::ground ? "ground"
                                                                      : "fock_unit_filling");
    entries.emplace_back("sweep.ju_min", format_number_exact(sweep.ju_min));
    entries.emplace_back("sweep.ju_max", format_number_exact(sweep.ju_max));
    entries.emplace_back("sweep.points", std::to_string(sweep.points));
    entries.emplace_back("sweep.spacing", sweep.log_spacing ? "log" : "linear");
    entries.emplace_back("trap.rf_drive_hz", format_number_exact(trap.rf_drive_hz));
    entries.emplace_back("trap.stability_q", format_number_exact(trap.stability_q));
    entries.emplace_back("trap.axial_freq_hz", format_number_exact(trap.axial_freq_hz));
    entries.emplace_back("trap.ion_spacing_m", format_number_exact(trap.ion_spacing_m));
    entries.emplace_back("trap.ion_mass_kg", format_number_exact(trap.ion_mass_kg));
    entries.emplace_back("trap.standing_wave_f_hz", format_number_exact(trap.standing_wave_f_hz));
    entries.emplace_back("trap.standing_wave_lambda_m",
                         format_number_exact(trap.standing_wave_lambda_m));
    entries.emplace_back("trap.delta_parity", std::to_string(trap.delta_parity));
    entries.emplace_back("trap.quench_mod_freq_hz", format_number_exact(trap.quench_mod_freq_hz));
    entries.emplace_back("detection.branching_f", format_number_exact(detection.branching_f));
    entries.emplace_back("detection.numerical_aperture",
                         format_number_exact(detection.numerical_aperture));
    entries.emplace_back("detection.solid_angle", format_number_exact(detection.solid_angle));
    entries.emplace_back("detection.p_lifetime_s", format_number_exact(detection.p_lifetime_s));
    entries.emplace_back("detection.quantum_eff", format_number_exact(detection.quantum_eff));
    entries.emplace_back("detection.optics_loss", format_number_exact(detection.optics_loss));
    entries.emplace_back("detection.gamma_convention",
                         detection.gamma_angular ? "angular" : "natural");
    entries.emplace_back("output.directory", output_directory);
    entries.emplace_back("run.workers", std::to_string(workers));
    entries.emplace_back("run.seed", std::to_string(seed));

    std::string text;
    for (const auto& [key, value] : entries) {
        text += key;
        text += " = ";
        text += value;
        text += "\n";
    }
    return text;
}

RunConfig parse_config(const std::string& text, const ConfigOverrides& overrides) {
    const RawConfig raw = tokenize(text);
    RunConfig config;
    Resolver resolve(raw, config);

    // mode: config key, overridable from the CLI; a disagreement is an error
    std::optional<std::string> config_mode;
    if (raw.has("mode")) config_mode = parse_choice("mode", raw.values.at("mode"));
    if (overrides.mode) {
        if (config_mode && *config_mode != *overrides.mode) {
            throw ConfigError("mode '" + *config_mode + "' in the configuration contradicts '" +
                              *overrides.mode + "' on the command line");
        }
        config.mode = parse_mode_name(*overrides.mode);
    } else if (config_mode) {
        config.mode = parse_mode_name(*config_mode);
    } else {
        throw ConfigError("missing required key 'mode' (derive|ground|quench|sweep)");
    }

    config.sites = static_cast<int>(resolve.integer("sector.sites", 5));
    if (config.sites < 1) throw ConfigError("sector.sites must be at least 1");
    if (resolve.user_set("sector.phonons")) {
        config.phonons = static_cast<int>(parse_integer("sector.phonons",
                                                        raw.values.at("sector.phonons")));
    } else {
        config.phonons = config.sites;  // unit filling
        resolve.note_default("sector.phonons", std::to_string(config.phonons));
    }
    if (config.phonons < 0) throw ConfigError("sector.phonons must be non-negative");
    const long cap = resolve.integer("sector.dimension_cap",
                                     static_cast<long>(BasisSector::default_dimension_cap));
    if (cap < 1) throw ConfigError("sector.dimension_cap must be positive");
    config.dimension_cap = static_cast<std::size_t>(cap);

    // coupling route
    const std::optional<double> ratio = resolve.optional_real("couplings.j_over_u");
    const std::optional<double> j_hz = resolve.optional_real("couplings.j_hz");
    const std::optional<double> u_hz = resolve.optional_real("couplings.u_hz");
    const bool from_trap = resolve.boolean("couplings.from_trap", false);
    if ((j_hz.has_value()) != (u_hz.has_value())) {
        throw ConfigError("couplings.j_hz and couplings.u_hz must be set together");
    }
    const int routes_set = (ratio ? 1 : 0) + (j_hz ? 1 : 0) + (from_trap ? 1 : 0);
    if (routes_set > 1) {
        throw ConfigError(
            "ambiguous couplings: set only one of couplings.j_over_u, couplings.j_hz with "
            "couplings.u_hz, or couplings.from_trap = true");
    }
    if (ratio) {
        if (!(*ratio >= 0.0)) throw ConfigError("couplings.j_over_u must be non-negative");
        config.route = CouplingRoute::ratio;
        config.j_over_u = *ratio;
    } else if (j_hz) {
        if (!(*j_hz >= 0.0) || !(*u_hz > 0.0)) {
            throw ConfigError(
                "couplings.j_hz must be non-negative and couplings.u_hz positive");
        }
        config.route = CouplingRoute::physical;
        config.j_hz = *j_hz;
        config.u_hz = *u_hz;
    } else if (from_trap) {
        config.route = CouplingRoute::trap;
    }
    if (config.mode == RunMode::quench && config.route == CouplingRoute::none) {
        throw ConfigError(
            "mode quench requires couplings: set couplings.j_over_u, or couplings.j_hz with "
            "couplings.u_hz, or couplings.from_trap = true");
    }
    config.hopping_sign = static_cast<int>(resolve.integer("couplings.hopping_sign", 1));
    if (config.hopping_sign != 1 && config.hopping_sign != -1) {
        throw ConfigError("couplings.hopping_sign must be 1 or -1");
    }

    // quench settings; site defaults resolve against the chain length
    if (resolve.user_set("quench.site")) {
        config.quench.site = static_cast<int>(parse_integer("quench.site",
                                                            raw.values.at("quench.site")));
    } else {
        config.quench.site = (config.sites + 1) / 2;
        resolve.note_default("quench.site", std::to_string(config.quench.site));
    }
    if (config.quench.site < 1 || config.quench.site > config.sites) {
        throw ConfigError("quench.site = " + std::to_string(config.quench.site) + " outside 1.." +
                          std::to_string(config.sites));
    }
    if (resolve.user_set("quench.measure_site")) {
        config.quench.measure_site = static_cast<int>(
            parse_integer("quench.measure_site", raw.values.at("quench.measure_site")));
    } else {
        config.quench.measure_site = config.quench.site;
        resolve.note_default("quench.measure_site", std::to_string(config.quench.measure_site));
    }
    if (config.quench.measure_site < 1 || config.quench.measure_site > config.sites) {
        throw ConfigError("quench.measure_site = " + std::to_string(config.quench.measure_site) +
                          " outside 1.." + std::to_string(config.sites));
    }
    config.quench.t_max_u = resolve.real("quench.t_max_u", 20.0);
    if (!(config.quench.t_max_u > 0.0)) throw ConfigError("quench.t_max_u must be positive");
    config.quench.samples = static_cast<int>(resolve.integer("quench.samples", 400));
    if (config.quench.samples < 1) throw ConfigError("quench.samples must be at least 1");
    config.quench.boundary =
        resolve.choice("quench.boundary", "open") == "open" ? Boundary::open : Boundary::periodic;
    config.quench.initial_state = resolve.choice("quench.initial_state", "ground") == "ground"
                                      ? InitialState::ground
                                      : InitialState::fock_unit_filling;

    // sweep grid
    config.sweep.ju_min = resolve.real("sweep.ju_min", 0.01);
    config.sweep.ju_max = resolve.real("sweep.ju_max", 3.0);
    config.sweep.points = static_cast<int>(resolve.integer("sweep.points", 25));
    config.sweep.log_spacing = resolve.choice("sweep.spacing", "log") == "log";
    if (!(config.sweep.ju_min > 0.0)) throw ConfigError("sweep.ju_min must be positive");
    if (config.sweep.ju_max < config.sweep.ju_min) {
        throw ConfigError("sweep.ju_max must be at least sweep.ju_min");
    }
    if (config.sweep.points < 1) throw ConfigError("sweep.points must be at least 1");
    if (config.sweep.points > 1 && config.sweep.ju_max == config.sweep.ju_min) {
        throw ConfigError("sweep.points > 1 needs ju_max > ju_min");
    }

    // trap and detection blocks always resolve so manifests are complete
    config.trap.rf_drive_hz = resolve.real("trap.rf_drive_hz", config.trap.rf_drive_hz);
    config.trap.stability_q = resolve.real("trap.stability_q", config.trap.stability_q);
    config.trap.axial_freq_hz = resolve.real("trap.axial_freq_hz", config.trap.axial_freq_hz);
    config.trap.ion_spacing_m = resolve.real("trap.ion_spacing_m", config.trap.ion_spacing_m);
    config.trap.ion_mass_kg = resolve.real("trap.ion_mass_kg", config.trap.ion_mass_kg);
    config.trap.standing_wave_f_hz =
        resolve.real("trap.standing_wave_f_hz", config.trap.standing_wave_f_hz);
    config.trap.standing_wave_lambda_m =
        resolve.real("trap.standing_wave_lambda_m", config.trap.standing_wave_lambda_m);
    config.trap.delta_parity =
        static_cast<int>(resolve.integer("trap.delta_parity", config.trap.delta_parity));
    config.trap.quench_mod_freq_hz =
        resolve.real("trap.quench_mod_freq_hz", config.trap.quench_mod_freq_hz);

    config.detection.branching_f =
        resolve.real("detection.branching_f", config.detection.branching_f);
    config.detection.numerical_aperture =
        resolve.real("detection.numerical_aperture", config.detection.numerical_aperture);
    config.detection.solid_angle =
        resolve.real("detection.solid_angle", config.detection.solid_angle);
    config.detection.p_lifetime_s =
        resolve.real("detection.p_lifetime_s", config.detection.p_lifetime_s);
    config.detection.quantum_eff =
        resolve.real("detection.quantum_eff", config.detection.quantum_eff);
    config.detection.optics_loss =
        resolve.real("detection.optics_loss", config.detection.optics_loss);
    config.detection.gamma_angular =
        resolve.choice("detection.gamma_convention", "natural") == "angular";

    try {
        if (config.mode == RunMode::derive || config.route == CouplingRoute::trap) {
            config.trap.validate();
        }
        config.detection.validate();
    } catch (const DomainError& error) {
        throw ConfigError(error.what());
    }

    // runner keys
    if (overrides.output_directory) {
        config.output_directory = *overrides.output_directory;
    } else if (raw.has("output.directory")) {
        config.output_directory = raw.values.at("output.directory");
    } else {
        config.output_directory = default_output_directory();
        resolve.note_default("output.directory", config.output_directory);
    }
    if (overrides.workers) {
        config.workers = *overrides.workers;
    } else if (raw.has("run.workers")) {
        config.workers = static_cast<int>(parse_integer("run.workers",
                                                        raw.values.at("run.workers")));
    } else {
        config.workers = available_parallelism();
        resolve.note_default("run.workers", std::to_string(config.workers));
    }
    if (config.workers < 1) throw ConfigError("run.workers must be at least 1");
    if (raw.has("run.seed")) {
        config.seed = parse_integer("run.seed", raw.values.at("run.seed"));
    } else {
        resolve.note_default("run.seed", "0");
    }

    return config;
}

}  // namespace phonon
