#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "tanglesim/experiments.hpp"

using namespace tanglesim;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GoalBattery tiny_battery() {
    GoalBattery b = load_goal(Goal::IV);
    b.rows.resize(4);  // Set 10 rows 1-4
    for (BatteryRow& r : b.rows) {
        r.config.total_nodes = 20;
        r.config.timing.operating_time = 400.0;
        r.config.seeds = {3, 1, 2};
    }
    return b;
}

MetricsRecord record_with(std::int64_t confirmed_invalid, std::int64_t total) {
    MetricsRecord m;
    m.confirmed_invalid = confirmed_invalid;
    m.confirmed_valid = total / 2;
    m.total_created = total;
    m.total_invalid_created = total / 4;
    m.live_at_end = total - confirmed_invalid - m.confirmed_valid;
    m.confirm_times.assign(static_cast<std::size_t>(confirmed_invalid + m.confirmed_valid), 300.0);
    m.update_ratios();
    return m;
}

}  // namespace

TEST_CASE("goal batteries have the tabled sizes and first rows") {
    CHECK(load_goal(Goal::I).rows.size() == 8);
    CHECK(load_goal(Goal::II).rows.size() == 45);
    CHECK(load_goal(Goal::III).rows.size() == 36);
    CHECK(load_goal(Goal::IV).rows.size() == 36);

    const BatteryRow r1 = load_goal(Goal::I).rows.front();
    CHECK(r1.set == 1);
    CHECK(r1.config.total_nodes == 100);
    CHECK(r1.config.ratio_f == 0.2);
    CHECK(r1.config.strategy.behaviors_str() == "bd");
    CHECK(r1.config.strategy.ratio_str() == "5:5");

    const BatteryRow r10 = load_goal(Goal::IV).rows.front();
    CHECK(r10.set == 10);
    CHECK(r10.config.ratio_f == 0.1);
    CHECK(r10.config.strategy.behaviors_str() == "ac");
    CHECK(r10.config.strategy.ratio_str() == "9:1");

    const BatteryRow r7 = load_goal(Goal::III).rows.front();
    CHECK(r7.set == 7);
    CHECK(r7.config.total_nodes == 20);
    CHECK(r7.config.malicious_nodes() == 2);
}

TEST_CASE("Set 8 at 100 nodes uses 20 malicious nodes") {
    const GoalBattery b = load_goal(Goal::III);
    for (const BatteryRow& r : b.rows)
        if (r.set == 8 && r.config.total_nodes == 100) CHECK(r.config.malicious_nodes() == 20);
    CHECK(std::any_of(b.notes.begin(), b.notes.end(),
                      [](const std::string& n) { return n.find("Set 8") != std::string::npos; }));
}

TEST_CASE("goal I at ten percent only changes the malicious rate") {
    const GoalBattery a = load_goal(Goal::I), b = goal_one_at_ten_percent();
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(b.rows[i].config.ratio_f == 0.1);
        CHECK(b.rows[i].config.strategy == a.rows[i].config.strategy);
    }
}

TEST_CASE("batteries byte-match the golden transcriptions") {
    for (Goal g : {Goal::I, Goal::II, Goal::III, Goal::IV}) {
        const std::string path =
            std::string(TANGLESIM_GOLDEN_DIR) + "/goal_" + std::string(to_string(g)) + ".txt";
        CAPTURE(path);
        CHECK(write_battery(load_goal(g)) == slurp(path));
    }
}

TEST_CASE("battery text round-trips") {
    for (Goal g : {Goal::I, Goal::II, Goal::III, Goal::IV}) {
        const GoalBattery b = load_goal(g);
        CHECK(read_battery(write_battery(b)) == b);
    }
    GoalBattery odd = tiny_battery();
    odd.label = "mine";
    odd.rows[1].config.ratio_f = 0.123456789;
    odd.rows[2].config.timing = odd.rows[0].config.timing;
    for (BatteryRow& r : odd.rows) r.config.timing.interval_d = 7.25;
    CHECK(read_battery(write_battery(odd)) == odd);
}

TEST_CASE("battery text: defaults, comments and errors") {
    const GoalBattery b = read_battery("# hand written\n\n3 1 50 0.3 abd 6:2:2   # trailing\r\n");
    CHECK(b.label == "custom");
    REQUIRE(b.rows.size() == 1);
    CHECK(b.rows[0].config.ratio_f == 0.3);
    CHECK(b.rows[0].config.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    CHECK(b.rows[0].config.timing == Timing{});

    CHECK_THROWS_WITH_AS(read_battery("1 1 100 20% ade 4:3:4\n"),
                         doctest::Contains("set 1 row 1: strategy: ratio '4:3:4' sums to 11"),
                         BatteryError);
    CHECK_THROWS_AS(read_battery("1 1 100 20% ade 4:3:3\n1 1 100 20% abe 4:3:3\n"), BatteryError);
    CHECK_THROWS_WITH_AS(read_battery("1 1 100 20% ade\n"), doctest::Contains("line 1"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(read_battery("seeds 1 x\n"), doctest::Contains("bad seed"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(read_battery("1 1 100 150% ade 4:3:3\n"), doctest::Contains("set 1 row 1"),
                         BatteryError);
    CHECK_THROWS_AS(read_battery("goal I\n"), std::invalid_argument);  // no rows
    CHECK_THROWS_AS(read_battery_file("/nonexistent/battery.txt"), std::runtime_error);
}

TEST_CASE("run_battery: order, determinism and serial agreement") {
    const GoalBattery b = tiny_battery();
    std::size_t callbacks = 0;
    const auto recs = run_battery(b, [&](const RunRecord&) { ++callbacks; });
    REQUIRE(recs.size() == 12);
    CHECK(callbacks == 12);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].row == static_cast<int>(i / 3) + 1);
        CHECK(recs[i].seed == b.rows[0].config.seeds[i % 3]);
    }
    CHECK(run_battery(b) == recs);
    CHECK(run_battery_serial(b) == recs);
}

TEST_CASE("run_battery tags the offending row") {
    GoalBattery b = tiny_battery();
    b.rows[2].config.total_nodes = 0;
    try {
        run_battery(b);
        FAIL("expected an error");
    } catch (const BatteryError& e) {
        CHECK(e.set() == 10);
        CHECK(e.row() == 3);
    }
    GoalBattery empty_seeds = tiny_battery();
    for (BatteryRow& r : empty_seeds.rows) r.config.seeds.clear();
    CHECK_THROWS_AS(run_battery(empty_seeds), BatteryError);
    CHECK_THROWS_AS(run_battery(GoalBattery{}), std::invalid_argument);
}

TEST_CASE("field statistics") {
    const FieldStats s = field_stats({14, 10});
    CHECK(s.mean == 12.0);
    CHECK(s.min == 10.0);
    CHECK(s.max == 14.0);
    CHECK(s.stddev == 2.0);
    CHECK(s.count == 2);
    CHECK(field_stats({}).count == 0);
    CHECK(coefficient_of_variation({0, 0, 0}) == 0.0);
    CHECK(coefficient_of_variation({1, 3}) == doctest::Approx(0.5));
    CHECK(ols_slope({0.1, 0.2, 0.3}, {5, 15, 25}) == doctest::Approx(100.0));
    CHECK_THROWS_AS(ols_slope({1, 1}, {1, 2}), std::invalid_argument);
}

TEST_CASE("aggregate of a single record equals the record") {
    RunRecord r;
    r.set = 4;
    r.row = 1;
    r.seed = 9;
    r.metrics = record_with(7, 100);
    const BatterySummary s = aggregate({r});
    REQUIRE(s.configs.size() == 1);
    const ConfigSummary& c = s.configs[0];
    CHECK(c.runs == 1);
    for (const std::string& f : summary_fields()) {
        CAPTURE(f);
        const auto v = summary_value(r.metrics, f);
        REQUIRE(v.has_value());
        CHECK(c.field(f).mean == *v);
        CHECK(c.field(f).min == *v);
        CHECK(c.field(f).max == *v);
        CHECK(c.field(f).stddev == 0.0);
    }
    CHECK(c.confirm_in_band == 1.0);
    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
}

TEST_CASE("aggregate: two seeds with 10 and 14 confirmed invalid average to 12") {
    RunRecord a, b;
    a.set = b.set = 1;
    a.row = b.row = 1;
    a.seed = 1;
    b.seed = 2;
    a.metrics = record_with(10, 200);
    b.metrics = record_with(14, 200);
    CHECK(aggregate({a, b}).configs[0].field("confirmed_invalid").mean == 12.0);
}

TEST_CASE("aggregate is order-insensitive") {
    const auto recs = run_battery(tiny_battery());
    const std::string base = summary_json(aggregate(recs, "x"));
    auto shuffled = recs;
    std::mt19937 rng(5);
    for (int i = 0; i < 5; ++i) {
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(summary_json(aggregate(shuffled, "x")) == base);
    }
}

TEST_CASE("trend statistics match a spreadsheet-style recomputation") {
    // Synthetic Goal IV style sweep: one strategy, ratio_b varies, two seeds.
    std::vector<RunRecord> recs;
    const char* ratios[] = {"9:1", "8:2", "7:3"};
    const std::int64_t valid[3][2] = {{50, 54}, {47, 49}, {52, 60}};
    for (int k = 0; k < 3; ++k)
        for (int s = 0; s < 2; ++s) {
            RunRecord r;
            r.set = 10;
            r.row = k + 1;
            r.seed = static_cast<std::uint64_t>(s + 1);
            r.config.ratio_f = 0.1;
            r.config.strategy = AttackStrategy::parse("ac", ratios[k]);
            r.metrics.confirmed_valid = valid[k][s];
            r.metrics.total_created = 100;
            r.metrics.live_at_end = 100 - valid[k][s];
            r.metrics.update_ratios();
            recs.push_back(r);
        }
    const BatterySummary s = aggregate(recs, "IV");
    REQUIRE(s.trends.size() == 1);
    const Trend& t = s.trends[0];
    CHECK(t.axis == TrendAxis::ratio_b);
    CHECK(t.x == std::vector<std::string>{"9:1", "8:2", "7:3"});
    // Means 0.52, 0.48, 0.56: mean 0.52, population sd sqrt(0.0032/3).
    const double want = std::sqrt((0.0 + 0.0016 + 0.0016) / 3.0) / 0.52;
    CHECK(t.cv_valid_over_total == doctest::Approx(want).epsilon(1e-12));
    CHECK_FALSE(t.confirmed_invalid_slope.has_value());
}

TEST_CASE("ratio_f trends report slope and monotonicity") {
    std::vector<RunRecord> recs;
    const double fs[] = {0.3, 0.1, 0.2};
    const std::int64_t ci[] = {25, 5, 15};
    for (int k = 0; k < 3; ++k) {
        RunRecord r;
        r.set = 4 + k;
        r.row = 1;
        r.seed = 1;
        r.config.ratio_f = fs[k];
        r.config.strategy = AttackStrategy::parse("ade", "6:2:2");
        r.metrics = record_with(ci[k], 1000);
        recs.push_back(r);
    }
    const BatterySummary s = aggregate(recs);
    REQUIRE(s.trends.size() == 1);
    const Trend& t = s.trends[0];
    CHECK(t.axis == TrendAxis::ratio_f);
    CHECK(t.x == std::vector<std::string>{"10%", "20%", "30%"});
    CHECK(t.sets == std::vector<int>{4, 5, 6});
    CHECK(t.confirmed_invalid_increasing);
    REQUIRE(t.confirmed_invalid_slope.has_value());
    CHECK(*t.confirmed_invalid_slope == doctest::Approx(100.0));
}

TEST_CASE("CSV layout") {
    const auto recs = run_battery(tiny_battery());
    std::ostringstream out;
    write_csv(out, "IV", recs);
    const std::string csv = out.str();
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(recs.size()) + 1);
    CHECK(csv.find('\r') == std::string::npos);
    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header.rfind("goal,set,row,seed,", 0) == 0);
    const auto columns = std::count(header.begin(), header.end(), ',');
    std::istringstream lines(csv);
    std::string line;
    while (std::getline(lines, line)) CHECK(std::count(line.begin(), line.end(), ',') == columns);
    CHECK(csv.find("\nIV,10,1,1,20,") != std::string::npos);
}

TEST_CASE("summary JSON carries configs and trends") {
    const std::string j = summary_json(aggregate(run_battery(tiny_battery()), "IV"));
    CHECK(j.find("\"goal\": \"IV\"") != std::string::npos);
    CHECK(j.find("\"cv_valid_over_total\"") != std::string::npos);
    CHECK(j.find("\"confirmed_invalid\"") != std::string::npos);
}
