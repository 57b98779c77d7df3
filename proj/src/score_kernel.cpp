#include "tanglesim/tangle_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace tanglesim {

namespace {

constexpr int kLevelTableSize = 64;
constexpr int kAgeTableSize = 1024;

// 100 / 5^L, evaluated exactly as selection_probability does.
const std::array<double, kLevelTableSize>& level_term_table() {
    static const std::array<double, kLevelTableSize> table = [] {
        std::array<double, kLevelTableSize> t{};
        for (int L = 0; L < kLevelTableSize; ++L) t[L] = 100.0 / std::pow(5.0, L);
        return t;
    }();
    return table;
}

// Smallest age from which 1.5^(age/60) >= k, padded to stay clear of
// rounding.
double zero_age(double k) {
    if (k <= 1.0) return 0.0;
    return 60.0 * std::log(k) / std::log(1.5) * (1.0 + 1e-9) + 1e-6;
}

const std::array<double, kAgeTableSize>& zero_age_table() {
    static const std::array<double, kAgeTableSize> table = [] {
        std::array<double, kAgeTableSize> t{};
        for (int k = 0; k < kAgeTableSize; ++k) t[k] = zero_age(k);
        return t;
    }();
    return table;
}

inline double level_term(const std::array<double, kLevelTableSize>& table, int L) {
    return L < kLevelTableSize ? table[static_cast<std::size_t>(L)] : 100.0 / std::pow(5.0, L);
}

// Age past which a score with time-free part `head` is certainly zero.
inline double cutoff_age(const std::array<double, kAgeTableSize>& table, double head) {
    const double k = std::ceil(head);
    return k < kAgeTableSize ? table[static_cast<std::size_t>(k)] : zero_age(k);
}

void check_inputs(const TangleGraph& graph, std::span<const TxId> candidates,
                  std::span<double> out) {
    if (out.size() != candidates.size())
        throw std::invalid_argument("score_candidates: output size mismatch");
    for (TxId id : candidates) graph.tx(id);
}

// Pool sizes below this are scored on the calling thread.
constexpr std::ptrdiff_t kParallelThreshold = 4096;

}  // namespace

void score_candidates_serial(const TangleGraph& graph, std::span<const TxId> candidates,
                             double now, std::span<double> out) {
    check_inputs(graph, candidates, out);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Transaction& t = graph.tx(candidates[i]);
        out[i] = selection_probability(graph.weight(t.id), graph.level_difference(t.id) + 1,
                                       std::max(0.0, now - t.issued_at));
    }
}

void score_candidates(const TangleGraph& graph, std::span<const TxId> candidates,
                      double now, std::span<double> out) {
    check_inputs(graph, candidates, out);
    const auto n = static_cast<std::ptrdiff_t>(candidates.size());
    const int frontier = graph.max_height();
    const auto& levels = level_term_table();
    const auto& ages = zero_age_table();
    // Beyond this the per-call factor overflows; take exp per candidate.
    const bool factored = kTimeRate * now < 700.0;
    const double growth = factored ? std::exp(kTimeRate * now) : 0.0;

#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const TxId id = candidates[k];
        const Transaction& t = graph.tx(id);
        const double head =
            3.0 * std::abs(15.0 - graph.weight(id)) + level_term(levels, frontier - t.height + 1);
        const double age = std::max(0.0, now - t.issued_at);
        if (age >= cutoff_age(ages, head)) {
            out[k] = 0.0;
            continue;
        }
        double term = 1.0;
        if (age > 0.0)
            term = factored ? growth * graph.time_discount(id) : std::exp(kTimeRate * age);
        const double p = head - term;
        out[k] = p > 0.0 ? p : 0.0;
    }
}

}  // namespace tanglesim
