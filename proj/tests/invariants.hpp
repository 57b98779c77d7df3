// Structural checks on a ledger snapshot, shared by the unit tests and the
// acceptance runner. Each returns an empty string when the check passes.

#pragma once

#include <algorithm>
#include <string>

#include "tanglesim/config.hpp"
#include "tanglesim/tangle_core.hpp"

namespace invariants {

// Parents have smaller ids and smaller heights, so no cycle can exist.
inline std::string acyclic(const tanglesim::TangleGraph& g) {
    for (tanglesim::TxId id = 1; id < g.size(); ++id) {
        const auto& t = g.tx(id);
        if (!t.has_parents) return "tx " + std::to_string(id) + " has no parents";
        for (auto p : t.parents)
            if (p >= id || g.tx(p).height >= t.height)
                return "tx " + std::to_string(id) + " approves " + std::to_string(p);
    }
    return {};
}

// Pools are sorted, hold exactly the live transactions of matching validity,
// and tips are live with no approvers.
inline std::string pools_sound(const tanglesim::TangleGraph& g) {
    using tanglesim::TxStatus;
    std::vector<char> approved(g.size(), 0);
    for (tanglesim::TxId id = 1; id < g.size(); ++id)
        for (auto p : g.tx(id).parents) approved[p] = 1;

    std::size_t live = 0;
    for (tanglesim::TxId id = 1; id < g.size(); ++id) {
        const auto& t = g.tx(id);
        if (tanglesim::is_terminal(t.status)) continue;
        ++live;
        const auto& pool = g.pool(t.is_valid);
        if (!std::binary_search(pool.begin(), pool.end(), id))
            return "live tx " + std::to_string(id) + " missing from its pool";
        if ((t.status == TxStatus::tip) == static_cast<bool>(approved[id]))
            return "tx " + std::to_string(id) + " tip status disagrees with approvals";
    }
    for (bool valid : {true, false}) {
        const auto& pool = g.pool(valid);
        if (!std::is_sorted(pool.begin(), pool.end())) return "pool not sorted";
        for (auto id : pool)
            if (g.tx(id).is_valid != valid || tanglesim::is_terminal(g.tx(id).status))
                return "pool holds tx " + std::to_string(id) + " wrongly";
    }
    if (live != g.valid_pool().size() + g.invalid_pool().size()) return "pool sizes off";
    for (auto t : g.tips())
        if (g.tx(t).status != TxStatus::tip) return "tip set holds a non-tip";
    return {};
}

inline std::string conserved(const tanglesim::MetricsRecord& m) {
    const auto settled = m.confirmed_valid + m.confirmed_invalid + m.abandoned_valid +
                         m.abandoned_invalid + m.live_at_end;
    if (settled != m.total_created)
        return "created " + std::to_string(m.total_created) + " but settled+live " +
               std::to_string(settled);
    if (static_cast<std::int64_t>(m.confirm_times.size()) != m.confirmed_valid + m.confirmed_invalid)
        return "confirm time count mismatch";
    return {};
}

}  // namespace invariants
