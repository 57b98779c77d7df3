#include "tanglesim/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "CLI11.hpp"

namespace tanglesim::cli {

namespace fs = std::filesystem;

RunRequest parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Tangle attack-strategy simulator", "tanglesim"};
    app.require_subcommand(1);
    CLI::App* run = app.add_subcommand("run", "Run a goal preset or a custom battery file");

    RunRequest req;
    std::string goal, config;
    std::vector<std::uint64_t> seeds;
    double malicious = 0, op_time = 0, interval = 0, pow = 0;
    int intake = 0;

    auto* goal_opt = run->add_option("--goal", goal, "Preset goal")
                         ->check(CLI::IsMember({"I", "II", "III", "IV"}));
    auto* config_opt = run->add_option("--config", config, "Battery file")->check(CLI::ExistingFile);
    goal_opt->excludes(config_opt);
    auto* seeds_opt = run->add_option("--seeds", seeds, "Comma-separated seed list")->delimiter(',');
    run->add_option("--out", req.output_dir, "Output directory")->capture_default_str();
    auto* mal_opt = run->add_option("--malicious-rate", malicious,
                                    "Override the malicious node rate of every row (0-1)");
    auto* op_opt = run->add_option("--operating-time", op_time, "Simulated seconds per run");
    auto* d_opt = run->add_option("--interval-d", interval, "Generation interval D (s)");
    auto* i_opt = run->add_option("--pow-i", pow, "Proof-of-work delay I (s)");
    auto* n_opt = run->add_option("--intake-n", intake, "Transactions received per second");
    run->add_flag("--serial", req.serial, "Run the battery on one thread");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw UsageError(run->parsed() ? run->help() : app.help(), true);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (goal_opt->count() == 0 && config_opt->count() == 0)
        throw UsageError("run: one of --goal or --config is required");
    if (goal_opt->count()) req.goal = goal_from_string(goal);
    if (config_opt->count()) req.config_path = config;
    if (seeds_opt->count()) {
        if (seeds.empty()) throw UsageError("--seeds: empty seed list");
        req.seeds = seeds;
    }
    if (mal_opt->count()) req.malicious_rate = malicious;
    if (op_opt->count()) req.timing.operating_time = op_time;
    if (d_opt->count()) req.timing.interval_d = interval;
    if (i_opt->count()) req.timing.pow_i = pow;
    if (n_opt->count()) req.timing.intake_n = intake;
    return req;
}

GoalBattery load_request(const RunRequest& request) {
    GoalBattery b = request.goal ? load_goal(*request.goal) : read_battery_file(*request.config_path);
    for (BatteryRow& r : b.rows) {
        ExperimentConfig& c = r.config;
        if (request.seeds) c.seeds = *request.seeds;
        if (request.malicious_rate) c.ratio_f = *request.malicious_rate;
        const TimingOverrides& t = request.timing;
        if (t.operating_time) c.timing.operating_time = *t.operating_time;
        if (t.interval_d) c.timing.interval_d = *t.interval_d;
        if (t.pow_i) c.timing.pow_i = *t.pow_i;
        if (t.intake_n) c.timing.intake_n = *t.intake_n;
    }
    validate_battery(b);
    return b;
}

namespace {

std::string file_label(const std::string& label) {
    std::string s;
    for (char ch : label)
        s += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_') ? ch : '_';
    return s.empty() ? "custom" : s;
}

std::string set_line(int set, const std::vector<RunRecord>& records) {
    const BatterySummary s = aggregate(records);
    double ci = 0, inv = 0, val = 0, ct = 0;
    int with_ct = 0;
    for (const ConfigSummary& c : s.configs) {
        ci += c.field("confirmed_invalid").mean;
        inv += c.field("invalid_over_total").mean;
        val += c.field("valid_over_total").mean;
        const FieldStats& t = c.field("confirm_time_mean");
        if (t.count) {
            ct += t.mean;
            ++with_ct;
        }
    }
    const double k = static_cast<double>(s.configs.size());
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "set %d: %zu configs, %zu runs; confirmed invalid %.1f, invalid/total %.4f, "
                  "valid/total %.4f, confirm time %.0f s",
                  set, s.configs.size(), records.size(), ci / k, inv / k, val / k,
                  with_ct ? ct / with_ct : 0.0);
    return buf;
}

}  // namespace

std::string csv_name(const std::string& label, int set) {
    return "goal_" + file_label(label) + "_set_" + std::to_string(set) + ".csv";
}

std::string summary_name(const std::string& label) {
    return "goal_" + file_label(label) + "_summary.json";
}

int execute(const RunRequest& request, std::ostream& log) {
    GoalBattery battery;
    try {
        battery = load_request(request);
    } catch (const std::exception& e) {
        log << "config error: " << e.what() << '\n';
        return 2;
    }

    const fs::path dir(request.output_dir);
    try {
        fs::create_directories(dir);
    } catch (const std::exception& e) {
        log << "output error: " << e.what() << '\n';
        return 3;
    }

    const std::size_t total = battery.rows.size() * battery.rows.front().config.seeds.size();
    std::size_t finished = 0;
    auto progress = [&](const RunRecord& r) {
        ++finished;
        log << "[" << finished << "/" << total << "] set " << r.set << " row " << r.row << " seed "
            << r.seed << '\n';
    };

    std::vector<RunRecord> records;
    try {
        records = request.serial ? run_battery_serial(battery, progress)
                                 : run_battery(battery, progress);
    } catch (const std::exception& e) {
        log << "run error: " << e.what() << '\n';
        return 2;
    }

    std::map<int, std::vector<RunRecord>> by_set;
    for (const RunRecord& r : records) by_set[r.set].push_back(r);

    auto write_file = [&](const std::string& name, auto&& body) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) return false;
        body(out);
        return static_cast<bool>(out.flush());
    };

    for (const auto& [set, recs] : by_set) {
        const std::string name = csv_name(battery.label, set);
        if (!write_file(name, [&](std::ostream& o) { write_csv(o, battery.label, recs); })) {
            log << "output error: cannot write " << (dir / name).string() << '\n';
            return 3;
        }
    }
    const std::string json_name = summary_name(battery.label);
    const std::string json = summary_json(aggregate(records, battery.label));
    if (!write_file(json_name, [&](std::ostream& o) { o << json; })) {
        log << "output error: cannot write " << (dir / json_name).string() << '\n';
        return 3;
    }

    for (const auto& [set, recs] : by_set) log << set_line(set, recs) << '\n';
    return 0;
}

}  // namespace tanglesim::cli
