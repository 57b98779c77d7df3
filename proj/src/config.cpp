#include "tanglesim/config.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tanglesim {

int ExperimentConfig::malicious_nodes() const {
    return static_cast<int>(std::lround(ratio_f * total_nodes));
}

void ExperimentConfig::validate_run() const {
    if (total_nodes < 1) throw std::invalid_argument("total_nodes must be >= 1");
    if (!(ratio_f >= 0.0 && ratio_f <= 1.0))
        throw std::invalid_argument("ratio_f must be in [0,1], got " + std::to_string(ratio_f));
    if (strategy.kind() == AttackKind::not_an_attack)
        throw std::invalid_argument("strategy is not a PS, DS or HB strategy");
    if (!(timing.interval_d > 0.0)) throw std::invalid_argument("interval D must be > 0");
    if (!(timing.pow_i >= 0.0)) throw std::invalid_argument("PoW delay I must be >= 0");
    if (timing.intake_n < 1) throw std::invalid_argument("intake n must be >= 1");
    if (!(timing.operating_time >= 0.0))
        throw std::invalid_argument("operating time must be >= 0");
}

void ExperimentConfig::validate() const {
    validate_run();
    if (seeds.empty()) throw std::invalid_argument("seed list must not be empty");
}

void MetricsRecord::update_ratios() {
    auto ratio = [](std::int64_t num, std::int64_t den) {
        return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
    };
    invalid_over_total = ratio(confirmed_invalid, total_created);
    valid_over_total = ratio(confirmed_valid, total_created);
    invalid_success = ratio(confirmed_invalid, total_invalid_created);
}

double MetricsRecord::mean_confirm_time() const {
    if (confirm_times.empty()) return 0.0;
    return std::accumulate(confirm_times.begin(), confirm_times.end(), 0.0) /
           static_cast<double>(confirm_times.size());
}

}  // namespace tanglesim
