#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cgloop {

/// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_domain = 3,
    exit_identity = 4,
    exit_tail = 5,
};

struct RunConfig {
    std::string command;
    std::optional<double> n;
    std::string phase = "dilute";
    std::optional<double> n_prime;
    std::string parity = "all";
    std::optional<double> ratio;
    std::optional<double> q;
    int order = 64;
    std::optional<std::string> backend;
    std::string format = "json";
    std::string output;
    double tolerance = 1e-8;

    // boundary
    double g = 1.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double width = 1.0;
    std::vector<double> epsilons{0.01, 0.005, 0.0025};

    // sweep
    std::string what = "crossing";
    std::vector<double> grid;
    std::string grid_kind = "q";
};

/// Runs one configured command, writing the payload to `out` (or the
/// configured file) and diagnostics to `err`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cgloop
