#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace repi {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kInequalityFailure = 1, kUsageError = 2, kNumericError = 3 };

struct RunConfig {
    std::string command;                  // entropy | constants | check
    std::string suite;                    // check suite name
    std::vector<std::string> families;    // analytic specs, name:params
    std::vector<std::string> csv_paths;
    std::vector<double> orders;           // --orders sweep
    std::optional<double> order;          // --order for checks
    std::vector<double> suborders;
    std::vector<double> lambda;
    std::optional<double> c;
    std::optional<double> alpha;
    std::vector<std::size_t> m;
    std::size_t grid_len = 0;             // 0: default (REPI_GRID_LEN or 8192)
    std::optional<double> tol;
    std::string format = "json";
    std::string output;
    std::uint64_t seed = 1;
    std::size_t samples = 100000;
    std::string transport = "identity";
};

/// Canonical text of a config; identical configs give identical text.
[[nodiscard]] std::string canonical(const RunConfig& config);
/// 64-bit FNV-1a, hex encoded.
[[nodiscard]] std::string fnv1a_hex(const std::string& text);

/// Runs the tool on argv-style arguments (without the program name).
/// Reports go to `out` unless --output is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace repi
