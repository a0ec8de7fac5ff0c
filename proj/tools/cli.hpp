#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace permbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitSize = 3;
inline constexpr int kExitInvariant = 4;

enum class Format { json, csv, human };

struct RunConfig {
    std::string command;
    std::optional<std::string> input_path;
    double tol = 1e-9;
    std::size_t max_iter = 10'000;
    std::uint64_t seed = 1;
    // Unset means the command's own default: CSV for friedland and bench,
    // JSON otherwise.
    std::optional<Format> format;
    std::optional<std::size_t> m;
    std::size_t k = 2;
    std::optional<std::size_t> n;
    std::optional<std::size_t> samples;
    std::string ensemble = "ds-random";
    std::string a = "auto";
    // Worker threads for ensemble commands; 0 picks the hardware count.
    std::size_t threads = 0;
};

const std::vector<std::string>& command_names();

// Runs one command, writing the report to `out` and diagnostics to `err`.
// Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv into a RunConfig and runs it.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace permbound::cli
