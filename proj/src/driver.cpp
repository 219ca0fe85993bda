#include "phonon/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "phonon/output.hpp"

namespace phonon {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const char* to_string(ValidityStatus status) {
    switch (status) {
        case ValidityStatus::pass: return "pass";
        case ValidityStatus::marginal: return "marginal";
        case ValidityStatus::fail: return "fail";
    }
    return "?";
}

// Collects written files so a failed run leaves no partial outputs behind.
class OutputTracker {
public:
    explicit OutputTracker(fs::path directory) : directory_(std::move(directory)) {}

    fs::path reserve(const std::string& name) {
        const fs::path path = directory_ / name;
        files_.push_back(path);
        return path;
    }

    void discard_written() {
        for (const fs::path& path : files_) {
            std::error_code ec;
            fs::remove(path, ec);
        }
    }

    const std::vector<fs::path>& files() const { return files_; }

private:
    fs::path directory_;
    std::vector<fs::path> files_;
};

ordered_json validity_to_json(const ValidityReport& report) {
    ordered_json checks = ordered_json::array();
    for (const ValidityCheck& check : report.checks) {
        checks.push_back({{"name", check.name},
                          {"ratio", check.ratio},
                          {"status", to_string(check.status)}});
    }
    return {{"all_pass", report.all_pass()}, {"checks", checks}};
}

void print_validity(std::ostream& out, const ValidityReport& report) {
    out << "validity report (pass <= " << validity_pass_threshold
        << ", marginal <= " << validity_marginal_threshold << "):\n";
    for (const ValidityCheck& check : report.checks) {
        out << "  " << check.name << " = " << format_number(check.ratio, 4) << "  ["
            << to_string(check.status) << "]\n";
    }
}

struct ManifestExtras {
    ordered_json validity;
    ordered_json derived;
    std::vector<std::string> warnings;
};

void write_manifest(const RunConfig& config, OutputTracker& tracker,
                    const std::vector<fs::path>& data_files, const ManifestExtras& extras,
                    double elapsed_seconds) {
    ordered_json manifest;
    manifest["artifact"] = project_name;
    manifest["version"] = project_version;
    manifest["mode"] = to_string(config.mode);

    std::vector<std::string> echo_lines;
    std::istringstream echo_stream(config.to_config_text());
    for (std::string line; std::getline(echo_stream, line);) echo_lines.push_back(line);
    manifest["config_echo"] = echo_lines;

    ordered_json defaults = ordered_json::object();
    for (const auto& [key, value] : config.resolved_defaults) defaults[key] = value;
    manifest["resolved_defaults"] = defaults;

    if (!extras.derived.is_null()) manifest["derived_couplings"] = extras.derived;
    if (!extras.validity.is_null()) manifest["validity"] = extras.validity;
    if (!extras.warnings.empty()) manifest["warnings"] = extras.warnings;

    ordered_json outputs = ordered_json::array();
    for (const fs::path& file : data_files) outputs.push_back(file.filename().string());
    manifest["outputs"] = outputs;
    manifest["timings"] = {{"total_seconds", elapsed_seconds}};

    const fs::path path = tracker.reserve("manifest.json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << manifest.dump(2) << "\n";
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

ordered_json derived_to_json(const DerivedCouplings& derived) {
    return {{"omega_x_hz", derived.omega_x_hz},
            {"eta_x", derived.eta_x},
            {"hopping_hz", derived.hopping_hz},
            {"onsite_u_hz", derived.onsite_u_hz},
            {"beta_x", derived.beta_x}};
}

ManifestExtras run_derive(const RunConfig& config, OutputTracker& tracker) {
    const DerivedCouplings derived = derive_couplings(config.trap);
    const ValidityReport report = validity_report(derived, config.trap.quench_mod_freq_hz,
                                                  config.trap.standing_wave_f_hz, derived.eta_x);

    const double eta4 = std::pow(derived.eta_x, 4);
    write_csv_text(tracker.reserve("couplings.csv"), {"quantity", "value", "unit"},
                   {{"omega_x", format_number(derived.omega_x_hz), "Hz"},
                    {"eta_x", format_number(derived.eta_x), "1"},
                    {"eta_x^4", format_number(eta4), "1"},
                    {"hopping_j", format_number(derived.hopping_hz), "Hz"},
                    {"onsite_u", format_number(derived.onsite_u_hz), "Hz"},
                    {"beta_x", format_number(derived.beta_x), "1"},
                    {"j_over_u", format_number(derived.hopping_hz / std::abs(derived.onsite_u_hz)),
                     "1"},
                    {"mean_count_rate", format_number(mean_count_rate(config.detection)),
                     "1/s"}});

    std::vector<std::vector<std::string>> validity_rows;
    for (const ValidityCheck& check : report.checks) {
        validity_rows.push_back({check.name, format_number(check.ratio),
                                 to_string(check.status)});
    }
    write_csv_text(tracker.reserve("validity.csv"), {"check", "ratio", "status"}, validity_rows);

    std::cout << "derived couplings:\n"
              << "  omega_x = " << format_number(derived.omega_x_hz / 1e6, 6) << " MHz\n"
              << "  eta_x   = " << format_number(derived.eta_x, 6)
              << "  (eta_x^4 = " << format_number(eta4, 6) << ")\n"
              << "  J       = " << format_number(derived.hopping_hz, 6) << " Hz\n"
              << "  U       = " << format_number(derived.onsite_u_hz, 6) << " Hz\n"
              << "  beta_x  = " << format_number(derived.beta_x, 6) << "\n"
              << "  J/U     = "
              << format_number(derived.hopping_hz / std::abs(derived.onsite_u_hz), 6) << "\n";
    print_validity(std::cout, report);

    ManifestExtras extras;
    extras.validity = validity_to_json(report);
    extras.derived = derived_to_json(derived);
    if (!report.all_pass()) {
        extras.warnings.push_back("one or more operating-window checks did not pass");
    }
    return extras;
}

ManifestExtras run_ground(const RunConfig& config, OutputTracker& tracker) {
    const std::vector<double> ju = config.sweep.grid();
    std::vector<double> u_values;
    u_values.reserve(ju.size());
    for (double r : ju) u_values.push_back(1.0 / r);  // J = 1 per point
    std::reverse(u_values.begin(), u_values.end());

    std::vector<CrossoverPoint> points =
        crossover_curve(config.sites, config.phonons, 1.0, u_values, config.quench.boundary,
                        config.workers);
    std::reverse(points.begin(), points.end());  // ascending J/U

    std::vector<std::vector<double>> rows;
    rows.reserve(points.size());
    for (const CrossoverPoint& p : points) {
        rows.push_back({p.j_over_u, p.delta_avg, p.delta_central, p.gap_over_u});
    }
    write_csv(tracker.reserve("ground.csv"),
              {"j_over_u", "delta_avg", "delta_central", "gap_over_u"}, rows);
    std::cout << "crossover curve over " << points.size() << " points, delta_avg from "
              << format_number(points.front().delta_avg, 4) << " to "
              << format_number(points.back().delta_avg, 4) << "\n";
    return {};
}

ManifestExtras run_quench_mode(const RunConfig& config, OutputTracker& tracker) {
    QuenchSpec spec;
    spec.sites = config.sites;
    spec.phonons = config.phonons;
    const double ju = config.resolved_j_over_u();
    spec.hopping = config.hopping_sign * ju;
    spec.u_initial = 1.0;  // energies in units of the initial U
    spec.quench_site = config.quench.site;
    spec.measure_site = config.quench.measure_site;
    spec.t_max_u = config.quench.t_max_u;
    spec.samples = config.quench.samples;
    spec.boundary = config.quench.boundary;
    spec.initial_state = config.quench.initial_state;
    spec.allow_sign_override = config.hopping_sign < 0;
    spec.dimension_cap = config.dimension_cap;

    const QuenchResult result = run_quench(spec);
    const std::optional<double> u_hz = config.physical_u_hz();
    const ObservableSeries photons = photon_series(result.zero_phonon, config.detection, u_hz);

    std::vector<std::string> header;
    if (u_hz) header.push_back("t_seconds");
    header.insert(header.end(), {"t_u", "n_i0", "mean_occupation", "count_rate_per_s"});
    std::vector<std::vector<double>> rows;
    rows.reserve(result.zero_phonon.times.size());
    for (std::size_t k = 0; k < result.zero_phonon.times.size(); ++k) {
        std::vector<double> row;
        if (u_hz) row.push_back(photons.times[k]);
        row.insert(row.end(), {result.zero_phonon.times[k], result.zero_phonon.values[k],
                               result.density.values[k], photons.values[k]});
        rows.push_back(std::move(row));
    }
    write_csv(tracker.reserve("quench.csv"), header, rows);

    LinePlot plot;
    plot.title = "predicted fluorescence after the local quench (J/U = " + format_number(ju, 4) +
                 ", site " + std::to_string(result.zero_phonon.site) + ")";
    plot.x_label = "t * U";
    plot.y_label = "count rate (1/s)";
    plot.series.push_back({"R_i", result.zero_phonon.times, photons.values});
    write_svg(tracker.reserve("quench.svg"), plot);

    std::cout << "quench run at J/U = " << format_number(ju, 6) << ", n_i0 amplitude = "
              << format_number(oscillation_amplitude(result.zero_phonon), 6) << "\n";

    ManifestExtras extras;
    if (config.route == CouplingRoute::trap) {
        const DerivedCouplings derived = derive_couplings(config.trap);
        extras.derived = derived_to_json(derived);
        extras.validity = validity_to_json(validity_report(
            derived, config.trap.quench_mod_freq_hz, config.trap.standing_wave_f_hz,
            derived.eta_x));
    }
    if (result.degeneracy_warning) {
        extras.warnings.push_back("initial ground state is near-degenerate");
        std::cerr << "warning: initial ground state is near-degenerate\n";
    }
    return extras;
}

ManifestExtras run_sweep(const RunConfig& config, OutputTracker& tracker) {
    QuenchSpec base;
    base.sites = config.sites;
    base.phonons = config.phonons;
    base.hopping = 1.0;  // U varies per point
    base.quench_site = config.quench.site;
    base.measure_site = config.quench.measure_site;
    base.t_max_u = config.quench.t_max_u;
    base.samples = config.quench.samples;
    base.boundary = config.quench.boundary;
    base.initial_state = config.quench.initial_state;
    base.dimension_cap = config.dimension_cap;

    const std::vector<double> ju = config.sweep.grid();
    const std::vector<SweepPoint> points = sweep_max_variation(base, ju, config.workers);
    const double rate = mean_count_rate(config.detection);

    std::vector<std::vector<double>> rows;
    std::vector<double> amp_x, amp_y;
    rows.reserve(points.size());
    for (const SweepPoint& p : points) {
        rows.push_back({p.j_over_u, p.amplitude, rate * p.amplitude, p.mean_zero_phonon});
        amp_x.push_back(p.j_over_u);
        amp_y.push_back(rate * p.amplitude);
    }
    write_csv(tracker.reserve("sweep.csv"),
              {"j_over_u", "n_variation", "count_rate_variation_per_s", "mean_n_i0"}, rows);

    LinePlot plot;
    plot.title = "maximum count-rate variation vs J/U";
    plot.x_label = "J/U";
    plot.y_label = "max variation (1/s)";
    plot.log_x = config.sweep.log_spacing;
    plot.series.push_back({"", amp_x, amp_y});
    write_svg(tracker.reserve("sweep.svg"), plot);

    const auto peak = std::max_element(points.begin(), points.end(),
                                       [](const SweepPoint& a, const SweepPoint& b) {
                                           return a.amplitude < b.amplitude;
                                       });
    std::cout << "sweep over " << points.size() << " points, peak amplitude "
              << format_number(peak->amplitude, 6) << " at J/U = "
              << format_number(peak->j_over_u, 6) << "\n";
    return {};
}

}  // namespace

RunArtifacts run_mode(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    std::error_code ec;
    fs::create_directories(config.output_directory, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + config.output_directory +
                      "': " + ec.message());
    }
    OutputTracker tracker(config.output_directory);
    try {
        ManifestExtras extras;
        switch (config.mode) {
            case RunMode::derive: extras = run_derive(config, tracker); break;
            case RunMode::ground: extras = run_ground(config, tracker); break;
            case RunMode::quench: extras = run_quench_mode(config, tracker); break;
            case RunMode::sweep: extras = run_sweep(config, tracker); break;
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const std::vector<fs::path> data_files = tracker.files();
        write_manifest(config, tracker, data_files, extras, elapsed);
    } catch (...) {
        tracker.discard_written();
        throw;
    }
    return {tracker.files()};
}

int cli_main(int argc, char** argv) {
    CLI::App app{"finite Bose-Hubbard phonon chain: local interaction quench simulator"};
    app.set_version_flag("--version", project_version);
    std::string mode;
    std::string config_path;
    std::string out_dir;
    int workers = 0;
    app.add_option("mode", mode, "one of: derive | ground | quench | sweep")
        ->required()
        ->check(CLI::IsMember({"derive", "ground", "quench", "sweep"}));
    app.add_option("--config", config_path, "configuration file (section.key = value lines)");
    app.add_option("--out", out_dir, "output directory (overrides output.directory)");
    app.add_option("--workers", workers, "sweep worker count (overrides run.workers)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::string text;
        if (!config_path.empty()) {
            std::ifstream in(config_path, std::ios::binary);
            if (!in) throw IoError("cannot read configuration file '" + config_path + "'");
            std::ostringstream buffer;
            buffer << in.rdbuf();
            text = buffer.str();
        }
        ConfigOverrides overrides;
        overrides.mode = mode;
        if (!out_dir.empty()) overrides.output_directory = out_dir;
        if (workers > 0) overrides.workers = workers;

        const RunConfig config = parse_config(text, overrides);
        const RunArtifacts artifacts = run_mode(config);
        for (const fs::path& file : artifacts.files) {
            std::cout << "wrote " << file.string() << "\n";
        }
        return 0;
    } catch (const ConfigError& error) {
        std::cerr << "configuration error: " << error.what() << "\n";
        return 2;
    } catch (const IoError& error) {
        std::cerr << "i/o error: " << error.what() << "\n";
        return 4;
    } catch (const Error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 3;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 3;
    }
}

}  // namespace phonon
