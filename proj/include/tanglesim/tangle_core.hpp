// Tangle DAG: transactions, cumulative weight, tip selection and pruning rules.

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace tanglesim {

using TxId = std::uint32_t;
using NodeId = std::uint32_t;
using Rng = std::mt19937_64;

inline constexpr TxId kGenesis = 0;
inline constexpr NodeId kNoIssuer = 0xffffffffu;

// Ancestors further than this many levels below a new tip receive nothing.
inline constexpr int kWeightHorizon = 29;
inline constexpr double kConfirmWeight = 30.0;
inline constexpr double kAbandonWeight = 30.0;
inline constexpr int kAbandonLevel = 30;
inline constexpr double kAbandonAge = 1000.0;
// ln(1.5) / 60: 1.5^(T/60) == exp(kTimeRate * T).
inline constexpr double kTimeRate = 0.4054651081081643819780131155 / 60.0;

enum class TxStatus : std::uint8_t { tip, attached, confirmed, abandoned };

std::string_view to_string(TxStatus s);

inline bool is_terminal(TxStatus s) {
    return s == TxStatus::confirmed || s == TxStatus::abandoned;
}

struct Transaction {
    TxId id = kGenesis;
    NodeId issuer = kNoIssuer;
    bool is_valid = true;
    int unit_weight = 1;
    int height = 0;
    double issued_at = 0.0;
    // Genesis carries {kGenesis, kGenesis} and has_parents == false.
    std::array<TxId, 2> parents{kGenesis, kGenesis};
    bool has_parents = false;
    TxStatus status = TxStatus::tip;
};

// Individual round weight w[L] contributed by a tip of current weight w_c to
// an ancestor L levels below it. Zero from L = 30 on.
double round_weight(double current_weight, int level_difference);

// Unnormalised selection score; clamped at zero.
double selection_probability(double cumulative_weight, int level_difference,
                             double elapsed);

// Pure forms of the pruning/confirmation predicates.
bool should_abandon(int level_difference, double cumulative_weight, double age);
bool is_confirmable(double cumulative_weight);

class TangleGraph {
public:
    // Starts with the genesis transaction only. Genesis is never pooled and
    // is not subject to confirmation or abandonment.
    TangleGraph();

    std::size_t size() const { return txs_.size(); }
    const Transaction& tx(TxId id) const {
        if (id >= txs_.size()) throw_unknown(id);
        return txs_[id];
    }
    double weight(TxId id) const {
        if (id >= txs_.size()) throw_unknown(id);
        return weight_[id];
    }
    int max_height() const { return max_height_; }
    // exp(-kTimeRate * issued_at), cached for the scoring kernel.
    double time_discount(TxId id) const {
        if (id >= txs_.size()) throw_unknown(id);
        return discount_[id];
    }

    // Level difference of a transaction measured from the current frontier.
    int level_difference(TxId id) const { return max_height_ - tx(id).height; }

    const std::set<TxId>& tips() const { return tips_; }
    const std::vector<TxId>& valid_pool() const { return valid_pool_; }
    const std::vector<TxId>& invalid_pool() const { return invalid_pool_; }
    const std::vector<TxId>& pool(bool valid) const {
        return valid ? valid_pool_ : invalid_pool_;
    }

    // Appends a transaction approving `parents`, routes it to the pool given by
    // its validity flag, and credits its ancestors. Returns the new id.
    TxId attach(NodeId issuer, bool is_valid, int unit_weight, double issued_at,
                std::array<TxId, 2> parents);

    // Moves a live transaction to confirmed or abandoned and drops it from the
    // pools and the tip set. Throws on an illegal transition.
    void finalize(TxId id, TxStatus terminal);

private:
    [[noreturn]] static void throw_unknown(TxId id);
    void propagate_weight(TxId new_tip);
    void pool_erase(std::vector<TxId>& pool, TxId id);

    std::vector<Transaction> txs_;
    std::vector<double> weight_;
    std::vector<double> discount_;
    std::vector<std::uint32_t> visit_mark_;
    std::uint32_t visit_epoch_ = 0;
    std::set<TxId> tips_;
    std::vector<TxId> valid_pool_;
    std::vector<TxId> invalid_pool_;
    int max_height_ = 0;
};

// Selection scores for every candidate: W is its cumulative weight, L its
// distance from the frontier plus one, T its age at `now`.
//
// score_candidates_serial is the plain reference. score_candidates agrees
// with it to rounding: it looks 5^L up in a table, splits 1.5^(T/60) into a
// per-call factor times the cached time_discount, skips candidates old enough
// that the score must clamp to zero, and spreads large pools over OpenMP
// threads.
void score_candidates_serial(const TangleGraph& graph, std::span<const TxId> candidates,
                             double now, std::span<double> out);
void score_candidates(const TangleGraph& graph, std::span<const TxId> candidates,
                      double now, std::span<double> out);

// Draws two parents from `candidates` weighted by selection_probability.
// Without replacement when there are at least two candidates; uniform when
// every score is zero.
std::pair<TxId, TxId> select_parents(const TangleGraph& graph,
                                     std::span<const TxId> candidates,
                                     double now, Rng& rng);

bool decide_abandon(const TangleGraph& graph, TxId id, double now);
bool decide_confirm(const TangleGraph& graph, TxId id);

}  // namespace tanglesim
