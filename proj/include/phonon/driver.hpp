#pragma once

#include <filesystem>
#include <vector>

#include "phonon/config.hpp"

namespace phonon {

struct RunArtifacts {
    std::vector<std::filesystem::path> files;
};

// Executes one configured run and writes its outputs (CSV, SVG, manifest)
// into the configured directory. Throws on any failure after removing the
// partially written files of this run.
RunArtifacts run_mode(const RunConfig& config);

// Full command-line entry point; maps errors onto exit codes
// (0 ok, 2 configuration, 3 numerics, 4 I/O).
int cli_main(int argc, char** argv);

}  // namespace phonon
