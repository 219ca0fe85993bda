#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phonon/quench.hpp"
#include "phonon/trap_model.hpp"

namespace phonon {

inline constexpr const char* project_name = "phonon-quench";
inline constexpr const char* project_version = "0.1.0";
inline constexpr const char* output_dir_env_var = "PHONON_QUENCH_OUTDIR";

enum class RunMode { derive, ground, quench, sweep };

const char* to_string(RunMode mode);

// How the chain couplings were specified: a bare J/U ratio, physical J and U
// in Hz, or the full trap parameter chain.
enum class CouplingRoute { none, ratio, physical, trap };

struct SweepSettings {
    double ju_min = 0.01;
    double ju_max = 3.0;
    int points = 25;
    bool log_spacing = true;

    std::vector<double> grid() const;
};

struct QuenchSettings {
    int site = 0;          // resolved at parse time
    int measure_site = 0;  // resolved at parse time
    double t_max_u = 20.0;
    int samples = 400;
    Boundary boundary = Boundary::open;
    InitialState initial_state = InitialState::ground;
};

// A fully resolved run configuration: every default the user did not set has
// been applied and recorded in `resolved_defaults`, and to_config_text()
// echoes the complete effective document so a run can be reproduced from its
// manifest alone.
struct RunConfig {
    RunMode mode = RunMode::derive;

    int sites = 5;
    int phonons = 5;
    std::size_t dimension_cap = BasisSector::default_dimension_cap;

    CouplingRoute route = CouplingRoute::none;
    double j_over_u = 0.0;
    double j_hz = 0.0;
    double u_hz = 0.0;
    int hopping_sign = 1;

    QuenchSettings quench;
    SweepSettings sweep;
    TrapParams trap;
    DetectionParams detection;

    std::string output_directory = ".";
    int workers = 1;
    long seed = 0;  // reserved; the simulation paths are deterministic

    std::vector<std::pair<std::string, std::string>> resolved_defaults;

    double resolved_j_over_u() const;
    std::optional<double> physical_u_hz() const;
    std::string to_config_text() const;
};

// CLI-level overrides; they count as user-set keys, not defaults.
struct ConfigOverrides {
    std::optional<std::string> mode;
    std::optional<std::string> output_directory;
    std::optional<int> workers;
};

// Parses the plain-text `section.key = value` configuration format
// (# starts a comment). Unknown keys report the nearest valid key; type
// mismatches report the expected type; a missing `mode` (when no override
// supplies one) and missing per-mode requirements are errors.
RunConfig parse_config(const std::string& text, const ConfigOverrides& overrides = {});

std::string default_output_directory();

}  // namespace phonon
