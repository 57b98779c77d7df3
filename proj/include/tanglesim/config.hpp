// Run inputs and outputs shared by the engine and the experiment harness.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tanglesim/attack_model.hpp"

namespace tanglesim {

struct Timing {
    double interval_d = 10.0;       // gap between a node's transactions
    double pow_i = 6.0;             // proof-of-work delay before broadcast
    int intake_n = 50;              // transactions received per simulated second
    double operating_time = 3000.0;

    friend bool operator==(const Timing&, const Timing&) = default;
};

struct ExperimentConfig {
    int total_nodes = 100;
    double ratio_f = 0.2;
    AttackStrategy strategy = AttackStrategy::parse("ade", "4:3:3");
    Timing timing;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

    // round(ratio_f * total_nodes)
    int malicious_nodes() const;

    // Checks everything a single run needs. Throws std::invalid_argument.
    void validate_run() const;
    // validate_run() plus a non-empty seed list.
    void validate() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct MetricsRecord {
    std::int64_t confirmed_invalid = 0;
    std::int64_t confirmed_valid = 0;
    std::vector<double> confirm_times;
    std::int64_t abandoned_invalid = 0;
    std::int64_t abandoned_valid = 0;
    std::int64_t total_created = 0;
    std::int64_t total_invalid_created = 0;
    // Created but neither confirmed nor abandoned when the run stopped,
    // including transactions still waiting for delivery.
    std::int64_t live_at_end = 0;

    double invalid_over_total = 0.0;   // confirmed_invalid / total_created
    double valid_over_total = 0.0;     // confirmed_valid / total_created
    double invalid_success = 0.0;      // confirmed_invalid / total_invalid_created

    // Recomputes the three ratios from the counts.
    void update_ratios();

    double mean_confirm_time() const;

    friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

}  // namespace tanglesim
