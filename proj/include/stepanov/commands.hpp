#pragma once

#include <cstdint>
#include <string>

namespace stepanov {

inline constexpr const char* kToolName = "stepanov";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// exit codes shared by the commands and the CLI
inline constexpr int kExitOk = 0;
inline constexpr int kExitToleranceFailure = 1;
inline constexpr int kExitManifestError = 2;
inline constexpr int kExitRefusal = 3;

struct RunConfig {
    std::string command;       // checks | classify | verify
    std::string manifest_path; // exactly one of manifest_path / zoo_name
    std::string zoo_name;
    int points = 9;
    std::uint64_t seed = 42;
    double tol = -1.0;    // < 0: per-jet-kind default
    double fd_tol = -1.0; // tolerance used when use_fd is set
    bool use_fd = false;
    int theorem = 0; // verify only
    int trials = 100;
    int dim = 4;
    std::string format = "text"; // text | json
};

struct RunResult {
    int exit_code = kExitOk;
    std::string output; // in the requested format, trailing newline included
};

RunResult run_checks(const RunConfig& cfg);
RunResult run_classify(const RunConfig& cfg);
RunResult run_verify(const RunConfig& cfg);

std::string zoo_table();
// Manifest JSON of a zoo entry; throws ManifestError on unknown names.
std::string zoo_export(const std::string& name);

} // namespace stepanov
