#include "tanglesim/sim_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tanglesim {

bool SimClock::Later::operator()(const Event& x, const Event& y) const {
    if (x.time != y.time) return x.time > y.time;
    if (x.node_key != y.node_key) return x.node_key > y.node_key;
    return x.seq > y.seq;
}

void SimClock::schedule(double time, std::int64_t node_key, EventKind kind) {
    queue_.push(Event{time, node_key, next_seq_++, kind});
}

Event SimClock::pop() {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.time;
    return ev;
}

std::pair<TxId, TxId> choose_parents(const TangleGraph& graph, NodeId issuer,
                                     UnitActions actions, double now, Rng& rng) {
    const std::vector<TxId>& pool = graph.pool(actions.valid_pool);
    if (pool.empty()) return {kGenesis, kGenesis};

    if (!actions.random_selection) {
        std::vector<TxId> own;
        for (TxId id : pool)
            if (graph.tx(id).issuer == issuer) own.push_back(id);
        if (own.size() >= 2) return select_parents(graph, own, now, rng);
    }
    return select_parents(graph, pool, now, rng);
}

SimulationRun::SimulationRun(const ExperimentConfig& config, std::uint64_t seed)
    : config_(config), rng_(seed) {
    config_.validate_run();
    const Timing& tm = config_.timing;

    const int n = config_.total_nodes;
    const int bad = config_.malicious_nodes();
    std::vector<NodeId> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng_);

    nodes_.resize(order.size());
    for (int i = 0; i < n; ++i) {
        NodeProfile& p = nodes_[static_cast<std::size_t>(i)];
        p.id = static_cast<NodeId>(i);
        p.generation_interval = tm.interval_d;
        p.pow_delay = tm.pow_i;
    }
    for (int i = 0; i < bad; ++i) {
        NodeProfile& p = nodes_[order[static_cast<std::size_t>(i)]];
        p.is_malicious = true;
        p.strategy = config_.strategy;
    }

    behaviors_.push_back(Behavior::a);  // genesis

    std::uniform_real_distribution<double> offset(0.0, tm.interval_d);
    for (const NodeProfile& p : nodes_) clock_.schedule(offset(rng_), p.id, EventKind::send);
    if (tm.operating_time >= 1.0) clock_.schedule(1.0, -1, EventKind::receive);
}

bool SimulationRun::finished() const {
    return clock_.empty() || clock_.peek().time > config_.timing.operating_time;
}

void SimulationRun::run_until(double t) {
    const double stop = std::min(t, config_.timing.operating_time);
    while (!clock_.empty() && clock_.peek().time <= stop) handle(clock_.pop());
}

void SimulationRun::mix(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        digest_ ^= (v >> (8 * i)) & 0xffu;
        digest_ *= 0x100000001b3ull;
    }
}

void SimulationRun::handle(const Event& ev) {
    mix(std::bit_cast<std::uint64_t>(ev.time));
    mix(static_cast<std::uint64_t>(ev.node_key));

    if (ev.kind == EventKind::receive) {
        receive_step();
        clock_.schedule(ev.time + 1.0, -1, EventKind::receive);
        return;
    }
    const NodeProfile& node = nodes_.at(static_cast<std::size_t>(ev.node_key));
    send_step(node.id);
    clock_.schedule(ev.time + node.generation_interval + node.pow_delay, node.id,
                    EventKind::send);
}

PendingTransaction SimulationRun::send_step(NodeId node_id, std::optional<Behavior> forced) {
    const NodeProfile& node = nodes_.at(node_id);
    const double now = clock_.now();

    Behavior behavior = Behavior::a;
    if (forced)
        behavior = *forced;
    else if (node.is_malicious)
        behavior = node.strategy->sample(rng_);
    const UnitActions actions = actions_of(behavior);

    PendingTransaction tx;
    tx.issuer = node.id;
    tx.behavior = behavior;
    tx.is_valid = actions.valid_tx;
    tx.unit_weight = std::uniform_int_distribution<int>(1, 4)(rng_);
    tx.issued_at = now + node.pow_delay;
    auto [p0, p1] = choose_parents(graph_, node.id, actions, now, rng_);
    tx.parents = {p0, p1};

    ++metrics_.total_created;
    if (!tx.is_valid) ++metrics_.total_invalid_created;
    mix(static_cast<std::uint64_t>(behavior) << 56 | std::uint64_t(tx.unit_weight) << 48 |
        std::uint64_t(p0) << 24 | p1);

    broadcasts_.push_back(tx);
    return tx;
}

void SimulationRun::receive_step() {
    const double now = clock_.now();

    for (int taken = 0; taken < config_.timing.intake_n && !broadcasts_.empty() &&
                        broadcasts_.front().issued_at <= now;
         ++taken) {
        const PendingTransaction& p = broadcasts_.front();
        const TxId id = graph_.attach(p.issuer, p.is_valid, p.unit_weight, p.issued_at, p.parents);
        behaviors_.push_back(p.behavior);
        live_.push_back(id);
        broadcasts_.pop_front();
    }

    std::size_t keep = 0;
    for (TxId id : live_) {
        const Transaction& t = graph_.tx(id);
        if (decide_confirm(graph_, id)) {
            graph_.finalize(id, TxStatus::confirmed);
            ++(t.is_valid ? metrics_.confirmed_valid : metrics_.confirmed_invalid);
            metrics_.confirm_times.push_back(now - t.issued_at);
        } else if (decide_abandon(graph_, id, now)) {
            graph_.finalize(id, TxStatus::abandoned);
            ++(t.is_valid ? metrics_.abandoned_valid : metrics_.abandoned_invalid);
        } else {
            live_[keep++] = id;
        }
    }
    live_.resize(keep);
}

MetricsRecord SimulationRun::metrics() const {
    MetricsRecord m = metrics_;
    m.live_at_end = static_cast<std::int64_t>(live_.size() + broadcasts_.size());
    m.update_ratios();
    return m;
}

MetricsRecord launch(const ExperimentConfig& config, std::uint64_t seed) {
    SimulationRun run(config, seed);
    run.run();
    return run.metrics();
}

}  // namespace tanglesim
