// Preset experiment batteries (Goals I-IV), battery runners, aggregation and
// result files.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tanglesim/config.hpp"

namespace tanglesim {

enum class Goal : std::uint8_t { I, II, III, IV };

std::string_view to_string(Goal g);
std::optional<Goal> goal_from_string(std::string_view s);

struct BatteryRow {
    int set = 0;
    int row = 0;  // 1-based within the set
    ExperimentConfig config;

    friend bool operator==(const BatteryRow&, const BatteryRow&) = default;
};

struct GoalBattery {
    std::string label;  // "I".."IV", or anything for a custom file
    std::vector<BatteryRow> rows;
    std::vector<std::string> notes;

    friend bool operator==(const GoalBattery&, const GoalBattery&) = default;
};

// Rows of one goal, with default timing and seeds {1..5}.
GoalBattery load_goal(Goal goal);

// Same as the Goal I battery but with every row at 10% malicious nodes.
GoalBattery goal_one_at_ten_percent();

// Error tagged with the battery row it came from.
class BatteryError : public std::invalid_argument {
public:
    BatteryError(int set, int row, const std::string& what);
    int set() const { return set_; }
    int row() const { return row_; }

private:
    int set_;
    int row_;
};

// Checks every row (validate() on its config) and that all rows share one
// timing and seed list. Throws BatteryError, or std::invalid_argument for an
// empty battery.
void validate_battery(const GoalBattery& battery);

// Plain-text battery format, one goal-table row per line:
//
//   goal II
//   note <free text>
//   seeds 1 2 3 4 5
//   timing 10 6 50 3000        (D, I, n, operating time)
//   # set row nodes malicious strategy ratio
//   4 1 100 10% ade 8:1:1
//
// "#" starts a comment. A single-behaviour strategy writes its ratio as "-".
std::string write_battery(const GoalBattery& battery);
GoalBattery read_battery(std::string_view text);
GoalBattery read_battery_file(const std::string& path);

struct RunRecord {
    int set = 0;
    int row = 0;
    ExperimentConfig config;
    std::uint64_t seed = 0;
    MetricsRecord metrics;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

using RunCallback = std::function<void(const RunRecord&)>;

// One record per (row, seed), in row order then seed order. run_battery
// spreads runs over OpenMP threads; the callback is invoked under a lock in
// completion order. Run failures are rethrown as BatteryError.
std::vector<RunRecord> run_battery(const GoalBattery& battery, const RunCallback& done = {});
std::vector<RunRecord> run_battery_serial(const GoalBattery& battery,
                                          const RunCallback& done = {});

struct FieldStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double stddev = 0.0;  // population
    std::size_t count = 0;
};

// Population statistics; all zero for an empty input.
FieldStats field_stats(std::vector<double> values);

// Population stddev over mean; 0 when every value is 0.
double coefficient_of_variation(const std::vector<double>& values);

// Least-squares slope of y on x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

// Names of the per-run quantities summarised by aggregate().
const std::vector<std::string>& summary_fields();

// Value of a summary field for one run. confirm_time_* are nullopt when the
// run confirmed nothing.
std::optional<double> summary_value(const MetricsRecord& m, std::string_view field);

struct ConfigSummary {
    int set = 0;
    int row = 0;
    ExperimentConfig config;
    std::size_t runs = 0;
    std::vector<FieldStats> fields;  // parallel to summary_fields()
    double confirm_in_band = 0.0;     // share of all confirm times in [200, 800]

    const FieldStats& field(std::string_view name) const;
};

enum class TrendAxis : std::uint8_t { ratio_f, ratio_b, nodes };

std::string_view to_string(TrendAxis a);

// One sweep along an axis with everything else fixed. Points are per-config
// means, deduplicated by axis value.
struct Trend {
    TrendAxis axis = TrendAxis::ratio_f;
    std::string fixed;            // e.g. "nodes=100 strategy=ade ratio=6:2:2"
    std::vector<int> sets;
    std::vector<std::string> x;   // axis labels in sweep order
    std::vector<double> confirmed_invalid;
    std::vector<double> invalid_over_total;
    std::vector<double> valid_over_total;
    bool confirmed_invalid_increasing = false;  // strictly, along x
    std::optional<double> confirmed_invalid_slope;  // numeric axes only
    double cv_invalid_over_total = 0.0;
    double cv_valid_over_total = 0.0;
};

struct BatterySummary {
    std::string label;
    std::vector<ConfigSummary> configs;  // battery row order
    std::vector<Trend> trends;
};

// Order-insensitive: any permutation of `records` gives the same summary.
// Throws std::invalid_argument on empty input.
BatterySummary aggregate(const std::vector<RunRecord>& records, std::string label = {});

// CSV with a header row; one line per record.
void write_csv(std::ostream& out, std::string_view goal, const std::vector<RunRecord>& records);
std::string summary_json(const BatterySummary& summary, int indent = 2);

}  // namespace tanglesim
