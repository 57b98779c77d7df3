// Serial reference vs OpenMP paths: the candidate scoring kernel and the
// battery runner.
//
//   tanglesim_bench [reps] [battery_operating_time]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "tanglesim/experiments.hpp"
#include "tanglesim/sim_engine.hpp"

using namespace tanglesim;
using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 200;
    const double battery_time = argc > 2 ? std::atof(argv[2]) : 400.0;
    std::printf("threads: %d\n", omp_get_max_threads());

    // A mid-run ledger with a realistic pool.
    ExperimentConfig cfg;
    cfg.total_nodes = 200;
    cfg.strategy = AttackStrategy::parse("abe", "6:2:2");
    SimulationRun run(cfg, 7);
    run.run_until(1500.0);
    const TangleGraph& g = run.graph();
    std::vector<TxId> pool = g.valid_pool();
    // Pad with repeats so the parallel branch is taken.
    while (pool.size() < 20000) pool.insert(pool.end(), g.valid_pool().begin(), g.valid_pool().end());
    const double now = run.now();
    std::printf("kernel: %zu candidates, %d reps\n", pool.size(), reps);

    std::vector<double> a(pool.size()), b(pool.size());
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) score_candidates_serial(g, pool, now, a);
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    for (int r = 0; r < reps; ++r) score_candidates(g, pool, now, b);
    const double tp = seconds_since(t0);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
    const double per = 1e9 / (static_cast<double>(pool.size()) * reps);
    std::printf("  serial  %8.3f s  %6.2f ns/candidate\n", ts, ts * per);
    std::printf("  fast    %8.3f s  %6.2f ns/candidate  speedup %.2fx  max|diff| %.3g\n", tp,
                tp * per, ts / tp, diff);

    GoalBattery battery = load_goal(Goal::IV);
    for (BatteryRow& r : battery.rows) {
        r.config.timing.operating_time = battery_time;
        r.config.seeds = {1, 2};
    }
    std::printf("battery: goal IV, %zu rows x 2 seeds, %.0f s each\n", battery.rows.size(),
                battery_time);
    t0 = Clock::now();
    const auto serial = run_battery_serial(battery);
    const double bs = seconds_since(t0);
    t0 = Clock::now();
    const auto parallel = run_battery(battery);
    const double bp = seconds_since(t0);
    std::printf("  serial  %8.3f s\n  openmp  %8.3f s  speedup %.2fx  identical %s\n", bs, bp,
                bs / bp, serial == parallel ? "yes" : "NO");
    return serial == parallel ? 0 : 1;
}
