#include <set>

#include "doctest.h"
#include "invariants.hpp"
#include "oracles.hpp"
#include "tanglesim/sim_engine.hpp"

using namespace tanglesim;

namespace {

// Nodes whose own send events fall far beyond the horizon, so a test can
// drive send_step by hand. PoW delay 0 makes a transaction due immediately.
ExperimentConfig quiet_config(int nodes = 5) {
    ExperimentConfig c;
    c.total_nodes = nodes;
    c.ratio_f = 0.2;
    c.strategy = AttackStrategy::parse("ac", "5:5");
    c.timing.interval_d = 1.0e7;
    c.timing.pow_i = 0.0;
    c.timing.operating_time = 100.0;
    return c;
}

ExperimentConfig small_config(std::string_view s = "abe", std::string_view r = "6:2:2") {
    ExperimentConfig c;
    c.total_nodes = 20;
    c.ratio_f = 0.3;
    c.strategy = AttackStrategy::parse(s, r);
    c.timing.operating_time = 1500.0;
    return c;
}

}  // namespace

TEST_CASE("clock orders by time, then node key, then insertion") {
    SimClock clock;
    clock.schedule(2.0, 3, EventKind::send);
    clock.schedule(1.0, 5, EventKind::send);
    clock.schedule(1.0, -1, EventKind::receive);
    clock.schedule(1.0, 5, EventKind::send);
    const Event e1 = clock.pop();
    CHECK(e1.kind == EventKind::receive);
    const Event e2 = clock.pop();
    const Event e3 = clock.pop();
    CHECK(e2.node_key == 5);
    CHECK(e2.seq < e3.seq);
    CHECK(clock.pop().time == 2.0);
    CHECK(clock.now() == 2.0);
    CHECK(clock.empty());
}

TEST_CASE("malicious node count rounds ratio times total") {
    ExperimentConfig c;
    const std::tuple<int, double, int> cases[] = {{20, 0.1, 2},   {50, 0.3, 15}, {20, 0.3, 6},
                                                  {200, 0.2, 40}, {7, 0.5, 4},   {100, 0.0, 0}};
    for (auto [n, f, want] : cases) {
        c.total_nodes = n;
        c.ratio_f = f;
        CHECK(c.malicious_nodes() == want);
        SimulationRun run(c, 1);
        int bad = 0;
        for (const NodeProfile& p : run.nodes()) bad += p.is_malicious;
        CHECK(bad == want);
    }
}

TEST_CASE("config validation") {
    ExperimentConfig c;
    c.total_nodes = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ExperimentConfig{};
    c.ratio_f = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ExperimentConfig{};
    c.seeds.clear();
    CHECK_NOTHROW(c.validate_run());
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ExperimentConfig{};
    c.timing.intake_n = 0;
    CHECK_THROWS_AS(SimulationRun(c, 1), std::invalid_argument);
}

TEST_CASE("first transaction bootstraps onto genesis") {
    SimulationRun run(quiet_config(), 1);
    const PendingTransaction p = run.send_step(0, Behavior::a);
    CHECK(p.parents == std::array<TxId, 2>{kGenesis, kGenesis});
    CHECK(p.is_valid);
    CHECK(p.unit_weight >= 1);
    CHECK(p.unit_weight <= 4);
    CHECK(run.pending_broadcasts() == 1);
    CHECK(run.graph().size() == 1);  // not delivered yet
    run.run_until(1.0);
    CHECK(run.graph().size() == 2);
    CHECK(run.behavior_of(1) == Behavior::a);
}

TEST_CASE("invalid-pool behaviour with an empty invalid pool falls back to genesis") {
    SimulationRun run(quiet_config(), 2);
    run.send_step(0, Behavior::a);
    run.send_step(1, Behavior::a);
    run.run_until(1.0);
    const PendingTransaction p = run.send_step(2, Behavior::e);
    CHECK_FALSE(p.is_valid);
    CHECK(p.parents == std::array<TxId, 2>{kGenesis, kGenesis});
}

TEST_CASE("selfish selection approves the issuer's own transactions") {
    SimulationRun run(quiet_config(), 3);
    for (int i = 0; i < 3; ++i) run.send_step(1, Behavior::a);
    for (int i = 0; i < 4; ++i) run.send_step(2, Behavior::a);
    run.run_until(1.0);
    REQUIRE(run.graph().valid_pool().size() == 7);
    for (int i = 0; i < 40; ++i) {
        const PendingTransaction p = run.send_step(1, Behavior::c);
        CHECK(p.parents[0] != p.parents[1]);
        for (TxId id : p.parents) CHECK(run.graph().tx(id).issuer == 1);
    }
    // With a single own transaction the whole pool is used.
    run.send_step(3, Behavior::a);
    run.run_until(2.0);
    std::set<NodeId> issuers;
    for (int i = 0; i < 60; ++i) {
        const PendingTransaction p = run.send_step(3, Behavior::c);
        for (TxId id : p.parents) issuers.insert(run.graph().tx(id).issuer);
    }
    CHECK(issuers.size() > 1);
}

TEST_CASE("receive step honours the intake cap and the PoW delay") {
    ExperimentConfig c = quiet_config();
    c.timing.intake_n = 2;
    SimulationRun run(c, 4);
    for (int i = 0; i < 5; ++i) run.send_step(0, Behavior::a);
    run.run_until(1.0);
    CHECK(run.graph().size() == 3);
    CHECK(run.pending_broadcasts() == 3);
    run.run_until(3.0);
    CHECK(run.graph().size() == 6);

    ExperimentConfig d = quiet_config();
    d.timing.pow_i = 5.0;
    SimulationRun late(d, 4);
    const PendingTransaction p = late.send_step(0, Behavior::a);
    CHECK(p.issued_at == 5.0);
    late.run_until(4.0);
    CHECK(late.graph().size() == 1);
    late.run_until(5.0);
    CHECK(late.graph().size() == 2);
}

TEST_CASE("run is deterministic per seed") {
    const ExperimentConfig c = small_config();
    SimulationRun a(c, 11), b(c, 11), other(c, 12);
    a.run();
    b.run();
    other.run();
    CHECK(a.metrics() == b.metrics());
    CHECK(a.trace_digest() == b.trace_digest());
    CHECK(a.trace_digest() != other.trace_digest());
    CHECK(launch(c, 11) == a.metrics());
}

TEST_CASE("stepwise run equals one-shot run") {
    const ExperimentConfig c = small_config("ade", "4:3:3");
    SimulationRun stepped(c, 5);
    for (double t = 0; !stepped.finished(); t += 137.0) stepped.run_until(t);
    CHECK(stepped.metrics() == launch(c, 5));
}

TEST_CASE("conservation, pools, acyclicity and weights on snapshots") {
    for (auto [s, r] : {std::pair{"abe", "6:2:2"}, std::pair{"ac", "8:2"}, std::pair{"abcd", "4:2:2:2"}}) {
        const ExperimentConfig c = small_config(s, r);
        SimulationRun run(c, 21);
        for (double t = 250; t <= c.timing.operating_time; t += 250) {
            run.run_until(t);
            CAPTURE(s);
            CAPTURE(t);
            CHECK(invariants::conserved(run.metrics()) == "");
            CHECK(invariants::pools_sound(run.graph()) == "");
            CHECK(invariants::acyclic(run.graph()) == "");
        }
        const auto W = oracle::cumulative_weights(run.graph());
        for (TxId id = 0; id < run.graph().size(); ++id)
            REQUIRE(run.graph().weight(id) == doctest::Approx(W[id]).epsilon(1e-9));
    }
}

TEST_CASE("metrics ratios are recomputable from counts") {
    const MetricsRecord m = launch(small_config(), 3);
    CHECK(m.total_created > 0);
    CHECK(m.invalid_over_total ==
          static_cast<double>(m.confirmed_invalid) / static_cast<double>(m.total_created));
    CHECK(m.valid_over_total ==
          static_cast<double>(m.confirmed_valid) / static_cast<double>(m.total_created));
    CHECK(m.invalid_success == static_cast<double>(m.confirmed_invalid) /
                                   static_cast<double>(m.total_invalid_created));
    for (double t : m.confirm_times) CHECK(t >= 0.0);
}

TEST_CASE("honest-only network never creates invalid transactions") {
    ExperimentConfig c = small_config();
    c.ratio_f = 0.0;
    const MetricsRecord m = launch(c, 1);
    CHECK(m.total_invalid_created == 0);
    CHECK(m.confirmed_invalid == 0);
    CHECK(m.confirmed_valid > 0);
}

TEST_CASE("behaviour record matches transaction validity") {
    SimulationRun run(small_config("abe", "4:3:3"), 8);
    run.run();
    const auto& g = run.graph();
    for (TxId id = 1; id < g.size(); ++id) {
        const Behavior b = run.behavior_of(id);
        CHECK(actions_of(b).valid_tx == g.tx(id).is_valid);
        if (!g.tx(id).is_valid) CHECK(b == Behavior::e);
        if (!actions_of(b).valid_pool)
            for (TxId p : g.tx(id).parents) CHECK((p == kGenesis || !g.tx(p).is_valid));
    }
}

TEST_CASE("stale transaction is abandoned and counted by its flag") {
    ExperimentConfig c = quiet_config();
    c.timing.operating_time = 2000.0;
    SimulationRun run(c, 6);
    run.send_step(0, Behavior::a);
    run.run_until(1000.0);
    CHECK(run.metrics().abandoned_valid == 0);
    run.run_until(1001.0);  // age 1001 > 1000, W <= 4
    CHECK(run.metrics().abandoned_valid == 1);
    CHECK(run.graph().tx(1).status == TxStatus::abandoned);
    CHECK(run.graph().valid_pool().empty());
}

TEST_CASE("transaction crossing weight 30 is confirmed with its confirm time") {
    SimulationRun run(quiet_config(), 7);
    run.send_step(0, Behavior::a);
    run.run_until(1.0);
    for (int i = 0; i < 40; ++i) {
        const PendingTransaction p = run.send_step(static_cast<NodeId>(i % 5), Behavior::a);
        CHECK(p.parents == std::array<TxId, 2>{1, 1});
    }
    run.run_until(2.0);
    CHECK(run.graph().tx(1).status == TxStatus::confirmed);
    const MetricsRecord m = run.metrics();
    CHECK(m.confirmed_valid == 1);
    REQUIRE(m.confirm_times.size() == 1);
    CHECK(m.confirm_times[0] == doctest::Approx(2.0));
}

TEST_CASE("liveness and honest issuer discipline") {
    ExperimentConfig c = small_config("abe", "4:3:3");
    c.timing.operating_time = c.timing.interval_d + c.timing.pow_i;
    SimulationRun early(c, 2);
    early.run();
    CHECK(early.graph().size() > 1);

    SimulationRun run(small_config("abe", "4:3:3"), 2);
    run.run();
    const auto& g = run.graph();
    std::int64_t confirmed = 0, abandoned = 0;
    for (TxId id = 1; id < g.size(); ++id) {
        const auto& t = g.tx(id);
        if (!run.nodes()[t.issuer].is_malicious) {
            CHECK(t.is_valid);
            CHECK(run.behavior_of(id) == Behavior::a);
        }
        confirmed += t.status == TxStatus::confirmed;
        abandoned += t.status == TxStatus::abandoned;
    }
    const MetricsRecord m = run.metrics();
    CHECK(confirmed == m.confirmed_valid + m.confirmed_invalid);
    CHECK(abandoned == m.abandoned_valid + m.abandoned_invalid);
}
