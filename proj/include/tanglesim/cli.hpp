// Command-line front end: argument parsing and the run command.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tanglesim/experiments.hpp"

namespace tanglesim::cli {

struct TimingOverrides {
    std::optional<double> operating_time;
    std::optional<double> interval_d;
    std::optional<double> pow_i;
    std::optional<int> intake_n;
};

struct RunRequest {
    std::optional<Goal> goal;
    std::optional<std::string> config_path;
    std::optional<std::vector<std::uint64_t>> seeds;
    std::optional<double> malicious_rate;  // applied to every row
    std::string output_dir = "results";
    TimingOverrides timing;
    bool serial = false;
};

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what, bool help = false)
        : std::runtime_error(what), help_(help) {}
    // True when the user asked for --help; what() is the help text.
    bool help() const { return help_; }

private:
    bool help_;
};

// args excludes the program name. Throws UsageError naming the bad flag.
RunRequest parse_args(const std::vector<std::string>& args);

// Loads the battery a request names and applies its overrides.
GoalBattery load_request(const RunRequest& request);

// Runs the request, writes one CSV per set plus a JSON summary into
// output_dir, and reports progress and per-set summaries on `log`.
// Returns 0 on success, 2 for a bad configuration, 3 for an output error.
int execute(const RunRequest& request, std::ostream& log);

// File names used by execute().
std::string csv_name(const std::string& label, int set);
std::string summary_name(const std::string& label);

}  // namespace tanglesim::cli
