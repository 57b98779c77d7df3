#include "tanglesim/tangle_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tanglesim {

std::string_view to_string(TxStatus s) {
    switch (s) {
    case TxStatus::tip: return "tip";
    case TxStatus::attached: return "attached";
    case TxStatus::confirmed: return "confirmed";
    case TxStatus::abandoned: return "abandoned";
    }
    return "?";
}

double round_weight(double current_weight, int level_difference) {
    if (!(current_weight > 0.0))
        throw std::invalid_argument("round_weight: current weight must be positive");
    if (level_difference < 1)
        throw std::invalid_argument("round_weight: level difference must be >= 1");

    // Closed form of the decay per level: 0.8^(L-1) up to L = 6, then
    // 0.8^5 * 0.9^(L-6) up to 16, then a flat 1% of w_c up to 29.
    static const std::array<double, kWeightHorizon + 1> factor = [] {
        std::array<double, kWeightHorizon + 1> f{};
        for (int L = 1; L <= kWeightHorizon; ++L) {
            if (L <= 6)
                f[L] = std::pow(0.8, L - 1);
            else if (L <= 16)
                f[L] = std::pow(0.8, 5) * std::pow(0.9, L - 6);
            else
                f[L] = 0.01;
        }
        return f;
    }();

    if (level_difference > kWeightHorizon) return 0.0;
    return current_weight * factor[static_cast<std::size_t>(level_difference)];
}

double selection_probability(double cumulative_weight, int level_difference,
                             double elapsed) {
    if (level_difference < 1)
        throw std::invalid_argument("selection_probability: level difference must be >= 1");
    if (elapsed < 0.0)
        throw std::invalid_argument("selection_probability: elapsed time must be >= 0");

    const double p = 3.0 * std::abs(15.0 - cumulative_weight) +
                     100.0 / std::pow(5.0, level_difference) -
                     std::pow(1.5, elapsed / 60.0);
    return p > 0.0 ? p : 0.0;
}

bool should_abandon(int level_difference, double cumulative_weight, double age) {
    return (level_difference > kAbandonLevel || cumulative_weight < kAbandonWeight) &&
           age > kAbandonAge;
}

bool is_confirmable(double cumulative_weight) {
    return cumulative_weight >= kConfirmWeight;
}

TangleGraph::TangleGraph() {
    Transaction genesis;
    genesis.status = TxStatus::confirmed;
    txs_.push_back(genesis);
    weight_.push_back(genesis.unit_weight);
    discount_.push_back(1.0);
    visit_mark_.push_back(0);
}

void TangleGraph::throw_unknown(TxId id) {
    throw std::out_of_range("unknown transaction id " + std::to_string(id));
}

TxId TangleGraph::attach(NodeId issuer, bool is_valid, int unit_weight,
                         double issued_at, std::array<TxId, 2> parents) {
    if (unit_weight < 1 || unit_weight > 4)
        throw std::invalid_argument("unit weight must be in [1,4]");
    for (TxId p : parents) tx(p);

    Transaction t;
    t.id = static_cast<TxId>(txs_.size());
    t.issuer = issuer;
    t.is_valid = is_valid;
    t.unit_weight = unit_weight;
    t.height = 1 + std::max(txs_[parents[0]].height, txs_[parents[1]].height);
    t.issued_at = issued_at;
    t.parents = parents;
    t.has_parents = true;
    t.status = TxStatus::tip;

    for (TxId p : parents) {
        if (txs_[p].status == TxStatus::tip) txs_[p].status = TxStatus::attached;
        tips_.erase(p);
    }

    txs_.push_back(t);
    weight_.push_back(unit_weight);
    discount_.push_back(std::exp(-kTimeRate * issued_at));
    visit_mark_.push_back(0);
    tips_.insert(t.id);
    (is_valid ? valid_pool_ : invalid_pool_).push_back(t.id);
    max_height_ = std::max(max_height_, t.height);

    propagate_weight(t.id);
    return t.id;
}

void TangleGraph::propagate_weight(TxId new_tip) {
    const Transaction& tip = txs_[new_tip];
    if (++visit_epoch_ == 0) {
        std::fill(visit_mark_.begin(), visit_mark_.end(), 0);
        visit_epoch_ = 1;
    }

    std::vector<TxId> stack(tip.parents.begin(), tip.parents.end());
    while (!stack.empty()) {
        const TxId id = stack.back();
        stack.pop_back();
        if (visit_mark_[id] == visit_epoch_) continue;
        visit_mark_[id] = visit_epoch_;

        const Transaction& anc = txs_[id];
        const int L = tip.height - anc.height;
        weight_[id] += round_weight(tip.unit_weight, L);
        if (anc.has_parents && L < kWeightHorizon) {
            stack.push_back(anc.parents[0]);
            stack.push_back(anc.parents[1]);
        }
    }
}

void TangleGraph::pool_erase(std::vector<TxId>& pool, TxId id) {
    auto it = std::lower_bound(pool.begin(), pool.end(), id);
    if (it != pool.end() && *it == id) pool.erase(it);
}

void TangleGraph::finalize(TxId id, TxStatus terminal) {
    const Transaction& t = tx(id);
    if (!is_terminal(terminal))
        throw std::invalid_argument("finalize: target status must be terminal");
    if (is_terminal(t.status))
        throw std::logic_error("transaction " + std::to_string(id) + " is already " +
                               std::string(to_string(t.status)));
    if (terminal == TxStatus::confirmed && t.status != TxStatus::attached)
        throw std::logic_error("only attached transactions can be confirmed");

    txs_[id].status = terminal;
    tips_.erase(id);
    pool_erase(t.is_valid ? valid_pool_ : invalid_pool_, id);
}

std::pair<TxId, TxId> select_parents(const TangleGraph& graph,
                                     std::span<const TxId> candidates,
                                     double now, Rng& rng) {
    if (candidates.empty())
        throw std::invalid_argument("select_parents: empty candidate pool");
    if (candidates.size() == 1) return {candidates[0], candidates[0]};

    std::vector<double> score(candidates.size());
    score_candidates(graph, candidates, now, score);
    double total = 0.0;
    for (double v : score) total += v;

    auto draw = [&](std::size_t skip) -> std::size_t {
        const std::size_t n = candidates.size();
        double mass = total;
        if (skip < n) {
            mass = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (i != skip) mass += score[i];
        }
        if (!(mass > 0.0)) {
            // Uniform over the remaining candidates.
            const std::size_t span = (skip < n) ? n - 1 : n;
            std::size_t k = std::uniform_int_distribution<std::size_t>(0, span - 1)(rng);
            if (skip < n && k >= skip) ++k;
            return k;
        }
        const double u = std::uniform_real_distribution<double>(0.0, mass)(rng);
        double acc = 0.0;
        std::size_t last = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == skip || score[i] <= 0.0) continue;
            acc += score[i];
            last = i;
            if (u < acc) return i;
        }
        return last;
    };

    const std::size_t first = draw(candidates.size());
    const std::size_t second = draw(first);
    return {candidates[first], candidates[second]};
}

bool decide_abandon(const TangleGraph& graph, TxId id, double now) {
    const Transaction& t = graph.tx(id);
    if (is_terminal(t.status))
        throw std::logic_error("decide_abandon: transaction " + std::to_string(id) +
                               " is already " + std::string(to_string(t.status)));
    return should_abandon(graph.level_difference(id), graph.weight(id), now - t.issued_at);
}

bool decide_confirm(const TangleGraph& graph, TxId id) {
    const Transaction& t = graph.tx(id);
    return t.status == TxStatus::attached && is_confirmable(graph.weight(id));
}

}  // namespace tanglesim
