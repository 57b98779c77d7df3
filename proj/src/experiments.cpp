#include "tanglesim/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "tanglesim/sim_engine.hpp"

namespace tanglesim {

std::string_view to_string(Goal g) {
    switch (g) {
    case Goal::I: return "I";
    case Goal::II: return "II";
    case Goal::III: return "III";
    case Goal::IV: return "IV";
    }
    return "?";
}

std::optional<Goal> goal_from_string(std::string_view s) {
    for (Goal g : {Goal::I, Goal::II, Goal::III, Goal::IV})
        if (s == to_string(g)) return g;
    return std::nullopt;
}

namespace {

BatteryRow make_row(int set, int row, int nodes, double ratio_f, std::string_view behaviors,
                    std::string_view ratio) {
    BatteryRow r;
    r.set = set;
    r.row = row;
    r.config.total_nodes = nodes;
    r.config.ratio_f = ratio_f;
    r.config.strategy = AttackStrategy::parse(behaviors, ratio);
    return r;
}

constexpr std::string_view kStarStrategies[] = {"ade", "abe", "abd"};
constexpr double kMaliciousRatios[] = {0.1, 0.2, 0.3};
constexpr std::string_view kSelfishRatios[] = {"9:1", "8:2", "7:3", "6:4", "5:5", "4:6"};
constexpr int kNodeCounts[] = {20, 50, 100, 200};

GoalBattery goal_one() {
    GoalBattery b;
    b.label = "I";
    const struct {
        int set;
        std::string_view s, r;
    } table[] = {
        {1, "bd", "5:5"},     {1, "be", "5:5"},     {2, "ade", "4:3:3"},
        {2, "abe", "4:3:3"},  {2, "abd", "4:3:3"},  {3, "e", "-"},
        {3, "abcd", "4:2:2:2"}, {3, "abdf", "4:2:2:2"},
    };
    int row = 0, last_set = 0;
    for (const auto& t : table) {
        row = (t.set == last_set) ? row + 1 : 1;
        last_set = t.set;
        b.rows.push_back(make_row(t.set, row, 100, 0.2, t.s, t.r));
    }
    b.notes.push_back("Set 1 has an empty third row; it is skipped.");
    b.notes.push_back("Set 3 strategy e is a single behaviour and takes the whole ratio.");
    b.notes.push_back(
        "Goal I is also described at a 10% malicious rate; rows use the tabled 20% "
        "(goal_one_at_ten_percent gives the 10% variant).");
    return b;
}

GoalBattery goal_two() {
    GoalBattery b;
    b.label = "II";
    constexpr std::string_view ratios[] = {"8:1:1", "6:2:2", "4:3:3", "6:3:1", "6:1:3"};
    for (int k = 0; k < 3; ++k) {
        int row = 0;
        for (std::string_view r : ratios)
            for (std::string_view s : kStarStrategies)
                b.rows.push_back(make_row(4 + k, ++row, 100, kMaliciousRatios[k], s, r));
    }
    return b;
}

GoalBattery goal_three() {
    GoalBattery b;
    b.label = "III";
    for (int k = 0; k < 3; ++k) {
        int row = 0;
        for (int nodes : kNodeCounts)
            for (std::string_view s : kStarStrategies)
                b.rows.push_back(make_row(7 + k, ++row, nodes, kMaliciousRatios[k], s, "6:2:2"));
    }
    b.notes.push_back(
        "Set 8, 100 nodes: the goal table lists F = 10 next to 20%; 20% is used (F = 20).");
    return b;
}

GoalBattery goal_four() {
    GoalBattery b;
    b.label = "IV";
    int row = 0;
    for (std::string_view r : kSelfishRatios)
        b.rows.push_back(make_row(10, ++row, 100, 0.1, "ac", r));
    row = 0;
    for (int nodes : kNodeCounts)
        for (double f : kMaliciousRatios) b.rows.push_back(make_row(11, ++row, nodes, f, "ac", "8:2"));
    row = 0;
    for (std::string_view r : kSelfishRatios)
        for (double f : kMaliciousRatios) b.rows.push_back(make_row(12, ++row, 100, f, "ac", r));
    return b;
}

}  // namespace

GoalBattery load_goal(Goal goal) {
    switch (goal) {
    case Goal::I: return goal_one();
    case Goal::II: return goal_two();
    case Goal::III: return goal_three();
    case Goal::IV: return goal_four();
    }
    throw std::invalid_argument("unknown goal");
}

GoalBattery goal_one_at_ten_percent() {
    GoalBattery b = goal_one();
    for (BatteryRow& r : b.rows) r.config.ratio_f = 0.1;
    b.notes.push_back("Malicious rate overridden to 10% on every row.");
    return b;
}

BatteryError::BatteryError(int set, int row, const std::string& what)
    : std::invalid_argument("set " + std::to_string(set) + " row " + std::to_string(row) + ": " +
                            what),
      set_(set),
      row_(row) {}

void validate_battery(const GoalBattery& battery) {
    if (battery.rows.empty()) throw std::invalid_argument("battery has no rows");
    const ExperimentConfig& first = battery.rows.front().config;
    for (const BatteryRow& r : battery.rows) {
        try {
            r.config.validate();
        } catch (const std::exception& e) {
            throw BatteryError(r.set, r.row, e.what());
        }
        if (r.config.timing != first.timing)
            throw BatteryError(r.set, r.row, "timing differs from the first row");
        if (r.config.seeds != first.seeds)
            throw BatteryError(r.set, r.row, "seed list differs from the first row");
    }
}

// ---- text format ----

namespace {

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string percent(double ratio_f) {
    char buf[64];
    for (int decimals = 0; decimals <= 17; ++decimals) {
        std::snprintf(buf, sizeof buf, "%.*f", decimals, ratio_f * 100.0);
        if (std::strtod(buf, nullptr) / 100.0 == ratio_f) break;
    }
    return std::string(buf) + "%";
}

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

template <class T>
T parse_number(const std::string& tok, int line, std::string_view what) {
    T v{};
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw std::invalid_argument("line " + std::to_string(line) + ": bad " + std::string(what) +
                                    " '" + tok + "'");
    return v;
}

double parse_ratio_f(const std::string& tok, int line) {
    if (!tok.empty() && tok.back() == '%')
        return parse_number<double>(tok.substr(0, tok.size() - 1), line, "malicious ratio") / 100.0;
    return parse_number<double>(tok, line, "malicious ratio");
}

}  // namespace

std::string write_battery(const GoalBattery& battery) {
    validate_battery(battery);
    const ExperimentConfig& first = battery.rows.front().config;
    std::ostringstream out;
    out << "goal " << battery.label << '\n';
    for (const std::string& n : battery.notes) out << "note " << n << '\n';
    out << "seeds";
    for (auto s : first.seeds) out << ' ' << s;
    out << '\n';
    const Timing& t = first.timing;
    out << "timing " << shortest(t.interval_d) << ' ' << shortest(t.pow_i) << ' ' << t.intake_n
        << ' ' << shortest(t.operating_time) << '\n';
    out << "# set row nodes malicious strategy ratio\n";
    for (const BatteryRow& r : battery.rows) {
        const AttackStrategy& s = r.config.strategy;
        out << r.set << ' ' << r.row << ' ' << r.config.total_nodes << ' '
            << percent(r.config.ratio_f) << ' ' << s.behaviors_str() << ' '
            << (s.behaviors().size() == 1 ? std::string("-") : s.ratio_str()) << '\n';
    }
    return out.str();
}

GoalBattery read_battery(std::string_view text) {
    GoalBattery b;
    bool have_goal = false;
    std::optional<std::vector<std::uint64_t>> seeds;
    std::optional<Timing> timing;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const auto hash = raw.find('#');
        const std::string body = raw.substr(0, hash);
        const auto tok = split_ws(body);
        if (tok.empty()) continue;
        const std::string where = "line " + std::to_string(line) + ": ";

        if (tok[0] == "goal") {
            if (have_goal) throw std::invalid_argument(where + "duplicate goal line");
            if (tok.size() != 2) throw std::invalid_argument(where + "expected 'goal <label>'");
            b.label = tok[1];
            have_goal = true;
        } else if (tok[0] == "note") {
            // Keep the note text verbatim after the keyword.
            const auto pos = body.find("note") + 4;
            std::string n = body.substr(pos);
            n.erase(0, n.find_first_not_of(" \t"));
            n.erase(n.find_last_not_of(" \t") + 1);
            b.notes.push_back(n);
        } else if (tok[0] == "seeds") {
            if (seeds) throw std::invalid_argument(where + "duplicate seeds line");
            seeds.emplace();
            for (std::size_t i = 1; i < tok.size(); ++i)
                seeds->push_back(parse_number<std::uint64_t>(tok[i], line, "seed"));
            if (seeds->empty()) throw std::invalid_argument(where + "seed list must not be empty");
        } else if (tok[0] == "timing") {
            if (timing) throw std::invalid_argument(where + "duplicate timing line");
            if (tok.size() != 5)
                throw std::invalid_argument(where + "expected 'timing D I n operating_time'");
            Timing t;
            t.interval_d = parse_number<double>(tok[1], line, "D");
            t.pow_i = parse_number<double>(tok[2], line, "I");
            t.intake_n = parse_number<int>(tok[3], line, "n");
            t.operating_time = parse_number<double>(tok[4], line, "operating time");
            timing = t;
        } else {
            if (tok.size() != 6)
                throw std::invalid_argument(where +
                                            "expected 'set row nodes malicious strategy ratio'");
            BatteryRow r;
            r.set = parse_number<int>(tok[0], line, "set");
            r.row = parse_number<int>(tok[1], line, "row");
            if (r.set < 1 || r.row < 1)
                throw std::invalid_argument(where + "set and row must be >= 1");
            r.config.total_nodes = parse_number<int>(tok[2], line, "node count");
            r.config.ratio_f = parse_ratio_f(tok[3], line);
            try {
                r.config.strategy = AttackStrategy::parse(tok[4], tok[5]);
            } catch (const std::exception& e) {
                throw BatteryError(r.set, r.row, e.what());
            }
            for (const BatteryRow& o : b.rows)
                if (o.set == r.set && o.row == r.row)
                    throw BatteryError(r.set, r.row, "duplicate row");
            b.rows.push_back(std::move(r));
        }
    }
    if (!have_goal) b.label = "custom";
    for (BatteryRow& r : b.rows) {
        if (seeds) r.config.seeds = *seeds;
        if (timing) r.config.timing = *timing;
    }
    validate_battery(b);
    return b;
}

GoalBattery read_battery_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_battery(ss.str());
}

// ---- runners ----

namespace {

std::vector<RunRecord> expand(const GoalBattery& battery) {
    std::vector<RunRecord> jobs;
    for (const BatteryRow& r : battery.rows)
        for (auto seed : r.config.seeds) {
            RunRecord j;
            j.set = r.set;
            j.row = r.row;
            j.config = r.config;
            j.seed = seed;
            jobs.push_back(std::move(j));
        }
    return jobs;
}

[[noreturn]] void rethrow_tagged(const RunRecord& job, std::exception_ptr e) {
    try {
        std::rethrow_exception(e);
    } catch (const BatteryError&) {
        throw;
    } catch (const std::exception& ex) {
        throw BatteryError(job.set, job.row, "seed " + std::to_string(job.seed) + ": " + ex.what());
    }
}

}  // namespace

std::vector<RunRecord> run_battery_serial(const GoalBattery& battery, const RunCallback& done) {
    validate_battery(battery);
    std::vector<RunRecord> jobs = expand(battery);
    for (RunRecord& j : jobs) {
        try {
            j.metrics = launch(j.config, j.seed);
        } catch (...) {
            rethrow_tagged(j, std::current_exception());
        }
        if (done) done(j);
    }
    return jobs;
}

std::vector<RunRecord> run_battery(const GoalBattery& battery, const RunCallback& done) {
    validate_battery(battery);
    std::vector<RunRecord> jobs = expand(battery);
    std::vector<std::exception_ptr> errors(jobs.size());
    const long n = static_cast<long>(jobs.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        RunRecord& j = jobs[static_cast<std::size_t>(i)];
        try {
            j.metrics = launch(j.config, j.seed);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
            continue;
        }
        if (done) {
#pragma omp critical(tanglesim_battery_done)
            done(j);
        }
    }

    for (std::size_t i = 0; i < jobs.size(); ++i)
        if (errors[i]) rethrow_tagged(jobs[i], errors[i]);
    return jobs;
}

// ---- aggregation ----

FieldStats field_stats(std::vector<double> values) {
    FieldStats s;
    if (values.empty()) return s;
    // Sorted so the sums do not depend on input order.
    std::sort(values.begin(), values.end());
    s.count = values.size();
    s.min = values.front();
    s.max = values.back();
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.count));
    return s;
}

double coefficient_of_variation(const std::vector<double>& values) {
    const FieldStats s = field_stats(values);
    if (s.mean == 0.0) return 0.0;
    return s.stddev / s.mean;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ols_slope needs two equally sized series of length >= 2");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_slope: x has no spread");
    return sxy / sxx;
}

const std::vector<std::string>& summary_fields() {
    static const std::vector<std::string> names = {
        "confirmed_invalid",  "confirmed_valid",   "confirm_count",
        "confirm_time_mean",  "confirm_time_min",  "confirm_time_max",
        "abandoned_invalid",  "abandoned_valid",   "total_created",
        "total_invalid_created", "live_at_end",    "invalid_over_total",
        "valid_over_total",   "invalid_success",
    };
    return names;
}

std::optional<double> summary_value(const MetricsRecord& m, std::string_view field) {
    auto d = [](std::int64_t v) { return static_cast<double>(v); };
    const auto& ct = m.confirm_times;
    if (field == "confirmed_invalid") return d(m.confirmed_invalid);
    if (field == "confirmed_valid") return d(m.confirmed_valid);
    if (field == "confirm_count") return static_cast<double>(ct.size());
    if (field == "confirm_time_mean") {
        if (ct.empty()) return std::nullopt;
        return m.mean_confirm_time();
    }
    if (field == "confirm_time_min") {
        if (ct.empty()) return std::nullopt;
        return *std::min_element(ct.begin(), ct.end());
    }
    if (field == "confirm_time_max") {
        if (ct.empty()) return std::nullopt;
        return *std::max_element(ct.begin(), ct.end());
    }
    if (field == "abandoned_invalid") return d(m.abandoned_invalid);
    if (field == "abandoned_valid") return d(m.abandoned_valid);
    if (field == "total_created") return d(m.total_created);
    if (field == "total_invalid_created") return d(m.total_invalid_created);
    if (field == "live_at_end") return d(m.live_at_end);
    if (field == "invalid_over_total") return m.invalid_over_total;
    if (field == "valid_over_total") return m.valid_over_total;
    if (field == "invalid_success") return m.invalid_success;
    throw std::invalid_argument("unknown summary field " + std::string(field));
}

const FieldStats& ConfigSummary::field(std::string_view name) const {
    const auto& names = summary_fields();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return fields.at(i);
    throw std::invalid_argument("unknown summary field " + std::string(name));
}

std::string_view to_string(TrendAxis a) {
    switch (a) {
    case TrendAxis::ratio_f: return "ratio_f";
    case TrendAxis::ratio_b: return "ratio_b";
    case TrendAxis::nodes: return "nodes";
    }
    return "?";
}

namespace {

std::string fixed_label(const ExperimentConfig& c, TrendAxis axis) {
    std::string s;
    if (axis != TrendAxis::nodes) s += "nodes=" + std::to_string(c.total_nodes) + " ";
    if (axis != TrendAxis::ratio_f) s += "malicious=" + percent(c.ratio_f) + " ";
    s += "strategy=" + c.strategy.behaviors_str();
    if (axis != TrendAxis::ratio_b) s += " ratio=" + c.strategy.ratio_str();
    return s;
}

std::string axis_label(const ExperimentConfig& c, TrendAxis axis) {
    switch (axis) {
    case TrendAxis::ratio_f: return percent(c.ratio_f);
    case TrendAxis::ratio_b: return c.strategy.ratio_str();
    case TrendAxis::nodes: return std::to_string(c.total_nodes);
    }
    return {};
}

std::vector<Trend> build_trends(const std::vector<ConfigSummary>& configs, TrendAxis axis) {
    struct Group {
        Trend trend;
        std::vector<const ConfigSummary*> points;
    };
    std::vector<Group> groups;
    for (const ConfigSummary& cs : configs) {
        const std::string key = fixed_label(cs.config, axis);
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const Group& g) { return g.trend.fixed == key; });
        if (it == groups.end()) {
            groups.emplace_back();
            it = std::prev(groups.end());
            it->trend.axis = axis;
            it->trend.fixed = key;
        }
        const std::string x = axis_label(cs.config, axis);
        if (std::find(it->trend.x.begin(), it->trend.x.end(), x) != it->trend.x.end()) continue;
        it->trend.x.push_back(x);
        it->points.push_back(&cs);
    }

    std::vector<Trend> out;
    for (Group& g : groups) {
        if (g.points.size() < 2) continue;
        if (axis != TrendAxis::ratio_b) {
            auto numeric = [axis](const ConfigSummary* p) {
                return axis == TrendAxis::nodes ? static_cast<double>(p->config.total_nodes)
                                                : p->config.ratio_f;
            };
            std::stable_sort(g.points.begin(), g.points.end(),
                             [&](auto* a, auto* b) { return numeric(a) < numeric(b); });
        }
        Trend& t = g.trend;
        t.x.clear();
        std::vector<double> xs;
        for (const ConfigSummary* p : g.points) {
            t.x.push_back(axis_label(p->config, axis));
            if (axis == TrendAxis::nodes) xs.push_back(p->config.total_nodes);
            if (axis == TrendAxis::ratio_f) xs.push_back(p->config.ratio_f);
            t.confirmed_invalid.push_back(p->field("confirmed_invalid").mean);
            t.invalid_over_total.push_back(p->field("invalid_over_total").mean);
            t.valid_over_total.push_back(p->field("valid_over_total").mean);
            if (std::find(t.sets.begin(), t.sets.end(), p->set) == t.sets.end())
                t.sets.push_back(p->set);
        }
        std::sort(t.sets.begin(), t.sets.end());
        t.confirmed_invalid_increasing = true;
        for (std::size_t i = 1; i < t.confirmed_invalid.size(); ++i)
            if (!(t.confirmed_invalid[i] > t.confirmed_invalid[i - 1]))
                t.confirmed_invalid_increasing = false;
        if (!xs.empty()) t.confirmed_invalid_slope = ols_slope(xs, t.confirmed_invalid);
        t.cv_invalid_over_total = coefficient_of_variation(t.invalid_over_total);
        t.cv_valid_over_total = coefficient_of_variation(t.valid_over_total);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

BatterySummary aggregate(const std::vector<RunRecord>& records, std::string label) {
    if (records.empty()) throw std::invalid_argument("aggregate: no records");

    std::map<std::pair<int, int>, std::vector<const RunRecord*>> by_row;
    for (const RunRecord& r : records) by_row[{r.set, r.row}].push_back(&r);

    BatterySummary out;
    out.label = std::move(label);
    const auto& names = summary_fields();
    for (auto& [key, runs] : by_row) {
        std::sort(runs.begin(), runs.end(),
                  [](auto* a, auto* b) { return a->seed < b->seed; });
        ConfigSummary cs;
        cs.set = key.first;
        cs.row = key.second;
        cs.config = runs.front()->config;
        cs.runs = runs.size();
        for (const std::string& name : names) {
            std::vector<double> vals;
            for (const RunRecord* r : runs)
                if (auto v = summary_value(r->metrics, name)) vals.push_back(*v);
            cs.fields.push_back(field_stats(std::move(vals)));
        }
        std::size_t in_band = 0, total = 0;
        for (const RunRecord* r : runs)
            for (double t : r->metrics.confirm_times) {
                ++total;
                if (t >= 200.0 && t <= 800.0) ++in_band;
            }
        cs.confirm_in_band = total ? static_cast<double>(in_band) / static_cast<double>(total) : 0.0;
        out.configs.push_back(std::move(cs));
    }

    for (TrendAxis axis : {TrendAxis::ratio_f, TrendAxis::ratio_b, TrendAxis::nodes}) {
        auto t = build_trends(out.configs, axis);
        out.trends.insert(out.trends.end(), t.begin(), t.end());
    }
    return out;
}

// ---- output ----

void write_csv(std::ostream& out, std::string_view goal, const std::vector<RunRecord>& records) {
    out << "goal,set,row,seed,total_nodes,ratio_f,malicious_nodes,strategy,ratio_b,"
           "interval_d,pow_i,intake_n,operating_time,confirmed_invalid,confirmed_valid,"
           "confirm_count,confirm_time_mean,confirm_time_min,confirm_time_max,"
           "abandoned_invalid,abandoned_valid,total_created,total_invalid_created,live_at_end,"
           "invalid_over_total,valid_over_total,invalid_success\n";
    auto opt = [](std::optional<double> v) { return v ? shortest(*v) : std::string(); };
    for (const RunRecord& r : records) {
        const ExperimentConfig& c = r.config;
        const MetricsRecord& m = r.metrics;
        out << goal << ',' << r.set << ',' << r.row << ',' << r.seed << ',' << c.total_nodes << ','
            << shortest(c.ratio_f) << ',' << c.malicious_nodes() << ','
            << c.strategy.behaviors_str() << ',' << c.strategy.ratio_str() << ','
            << shortest(c.timing.interval_d) << ',' << shortest(c.timing.pow_i) << ','
            << c.timing.intake_n << ',' << shortest(c.timing.operating_time) << ','
            << m.confirmed_invalid << ',' << m.confirmed_valid << ',' << m.confirm_times.size()
            << ',' << opt(summary_value(m, "confirm_time_mean")) << ','
            << opt(summary_value(m, "confirm_time_min")) << ','
            << opt(summary_value(m, "confirm_time_max")) << ',' << m.abandoned_invalid << ','
            << m.abandoned_valid << ',' << m.total_created << ',' << m.total_invalid_created << ','
            << m.live_at_end << ',' << shortest(m.invalid_over_total) << ','
            << shortest(m.valid_over_total) << ',' << shortest(m.invalid_success) << '\n';
    }
}

std::string summary_json(const BatterySummary& summary, int indent) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["goal"] = summary.label;

    ordered_json configs = ordered_json::array();
    const auto& names = summary_fields();
    for (const ConfigSummary& cs : summary.configs) {
        ordered_json c;
        c["set"] = cs.set;
        c["row"] = cs.row;
        c["total_nodes"] = cs.config.total_nodes;
        c["ratio_f"] = cs.config.ratio_f;
        c["malicious_nodes"] = cs.config.malicious_nodes();
        c["strategy"] = cs.config.strategy.behaviors_str();
        c["ratio_b"] = cs.config.strategy.ratio_str();
        c["kind"] = std::string(to_string(cs.config.strategy.kind()));
        c["runs"] = cs.runs;
        c["confirm_in_band"] = cs.confirm_in_band;
        ordered_json fields;
        for (std::size_t i = 0; i < names.size(); ++i) {
            const FieldStats& s = cs.fields[i];
            fields[names[i]] = {{"mean", s.mean}, {"min", s.min}, {"max", s.max},
                                {"stddev", s.stddev}, {"count", s.count}};
        }
        c["fields"] = std::move(fields);
        configs.push_back(std::move(c));
    }
    j["configs"] = std::move(configs);

    ordered_json trends = ordered_json::array();
    for (const Trend& t : summary.trends) {
        ordered_json o;
        o["axis"] = std::string(to_string(t.axis));
        o["fixed"] = t.fixed;
        o["sets"] = t.sets;
        o["x"] = t.x;
        o["confirmed_invalid"] = t.confirmed_invalid;
        o["invalid_over_total"] = t.invalid_over_total;
        o["valid_over_total"] = t.valid_over_total;
        o["confirmed_invalid_increasing"] = t.confirmed_invalid_increasing;
        if (t.confirmed_invalid_slope)
            o["confirmed_invalid_slope"] = *t.confirmed_invalid_slope;
        else
            o["confirmed_invalid_slope"] = nullptr;
        o["cv_invalid_over_total"] = t.cv_invalid_over_total;
        o["cv_valid_over_total"] = t.cv_valid_over_total;
        trends.push_back(std::move(o));
    }
    j["trends"] = std::move(trends);
    return j.dump(indent) + "\n";
}

}  // namespace tanglesim
