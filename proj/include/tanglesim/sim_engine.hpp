// Discrete-event driver: node population, simulated clock, and the launch /
// receive / send workflows over a single shared ledger.

#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <vector>

#include "tanglesim/attack_model.hpp"
#include "tanglesim/config.hpp"
#include "tanglesim/tangle_core.hpp"

namespace tanglesim {

struct NodeProfile {
    NodeId id = 0;
    bool is_malicious = false;
    std::optional<AttackStrategy> strategy;  // empty for honest nodes
    double generation_interval = 10.0;
    double pow_delay = 2.0;
};

enum class EventKind : std::uint8_t { receive, send };

struct Event {
    double time = 0.0;
    // Receive ticks use -1 so they run before any send at the same instant.
    std::int64_t node_key = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::send;
};

// Min-queue on (time, node_key, seq).
class SimClock {
public:
    double now() const { return now_; }
    bool empty() const { return queue_.empty(); }
    const Event& peek() const { return queue_.top(); }
    void schedule(double time, std::int64_t node_key, EventKind kind);
    Event pop();

private:
    struct Later {
        bool operator()(const Event& x, const Event& y) const;
    };
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t next_seq_ = 0;
    double now_ = 0.0;
};

// A transaction that finished proof of work and waits to be received.
struct PendingTransaction {
    NodeId issuer = 0;
    Behavior behavior = Behavior::a;
    bool is_valid = true;
    int unit_weight = 1;
    double issued_at = 0.0;
    std::array<TxId, 2> parents{kGenesis, kGenesis};
};

// Parent choice for one behaviour: pick the pool by action C, restrict to the
// issuer's own transactions under selfish selection when it owns at least two
// there, and fall back to genesis when the pool is empty.
std::pair<TxId, TxId> choose_parents(const TangleGraph& graph, NodeId issuer,
                                     UnitActions actions, double now, Rng& rng);

class SimulationRun {
public:
    SimulationRun(const ExperimentConfig& config, std::uint64_t seed);

    // Processes every event with time <= t (capped at the operating time).
    void run_until(double t);
    void run() { run_until(config_.timing.operating_time); }
    bool finished() const;

    // Creates one transaction for `node` at the current time and queues it for
    // delivery after the PoW delay. `forced` overrides behaviour sampling.
    PendingTransaction send_step(NodeId node, std::optional<Behavior> forced = std::nullopt);

    // Delivers up to intake_n due broadcasts, then confirms or prunes live
    // transactions.
    void receive_step();

    double now() const { return clock_.now(); }
    const TangleGraph& graph() const { return graph_; }
    const std::vector<NodeProfile>& nodes() const { return nodes_; }
    const ExperimentConfig& config() const { return config_; }
    std::size_t pending_broadcasts() const { return broadcasts_.size(); }
    // Behaviour that produced a transaction (genesis reports a).
    Behavior behavior_of(TxId id) const { return behaviors_.at(id); }
    std::uint64_t trace_digest() const { return digest_; }

    // Metrics so far, with live count and ratios filled in.
    MetricsRecord metrics() const;

private:
    void handle(const Event& ev);
    void mix(std::uint64_t v);

    ExperimentConfig config_;
    Rng rng_;
    TangleGraph graph_;
    std::vector<NodeProfile> nodes_;
    SimClock clock_;
    std::deque<PendingTransaction> broadcasts_;
    std::vector<TxId> live_;
    std::vector<Behavior> behaviors_;
    MetricsRecord metrics_;
    std::uint64_t digest_ = 0xcbf29ce484222325ull;
};

// Runs one configuration to completion.
MetricsRecord launch(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace tanglesim
