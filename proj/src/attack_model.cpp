#include "tanglesim/attack_model.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>
#include <set>
#include <stdexcept>

namespace tanglesim {

namespace {

// Action bits per behaviour, index order a..f (bits: A B C).
constexpr std::array<std::uint8_t, 6> kCodes{0b111, 0b110, 0b101, 0b011, 0b010, 0b001};

using Slot = std::vector<std::optional<Behavior>>;

// Every union obtained by picking one option from each slot.
std::set<BehaviorSet> slot_unions(const std::array<Slot, 4>& slots) {
    std::set<BehaviorSet> out;
    for (const auto& s1 : slots[0])
        for (const auto& s2 : slots[1])
            for (const auto& s3 : slots[2])
                for (const auto& s4 : slots[3]) {
                    BehaviorSet set;
                    for (const auto& pick : {s1, s2, s3, s4})
                        if (pick) set.insert(*pick);
                    if (!set.empty()) out.insert(set);
                }
    return out;
}

constexpr std::optional<Behavior> kNone{};

const std::set<BehaviorSet>& derivable(AttackKind kind) {
    using B = Behavior;
    static const std::set<BehaviorSet> ps = slot_unions(
        {Slot{B::a, kNone}, Slot{kNone}, Slot{kNone}, Slot{B::c}});
    static const std::set<BehaviorSet> ds = slot_unions(
        {Slot{B::a, kNone}, Slot{B::d, B::e}, Slot{B::b, B::e}, Slot{kNone}});
    static const std::set<BehaviorSet> hb = slot_unions(
        {Slot{B::a, kNone}, Slot{B::d, B::e, B::f}, Slot{B::b, B::e}, Slot{B::c, B::f}});
    static const std::set<BehaviorSet> none;
    switch (kind) {
    case AttackKind::parasite: return ps;
    case AttackKind::double_spend: return ds;
    case AttackKind::hybrid: return hb;
    default: return none;
    }
}

bool is_subset(BehaviorSet s, BehaviorSet of) { return (s.mask() & ~of.mask()) == 0; }

std::vector<BehaviorSet> parse_list(std::string_view csv) {
    std::vector<BehaviorSet> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t end = csv.find(',', start);
        if (end == std::string_view::npos) end = csv.size();
        out.push_back(BehaviorSet::parse(csv.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

std::string join(const std::vector<BehaviorSet>& sets) {
    std::string s;
    for (const auto& b : sets) {
        if (!s.empty()) s += ',';
        s += b.str();
    }
    return s.empty() ? "(none)" : s;
}

}  // namespace

char to_char(Behavior b) { return static_cast<char>('a' + static_cast<int>(b)); }

std::optional<Behavior> behavior_from_char(char c) {
    if (c < 'a' || c > 'f') return std::nullopt;
    return static_cast<Behavior>(c - 'a');
}

std::optional<Behavior> behavior_from_bits(bool valid_tx, bool random_selection,
                                           bool valid_pool) {
    const std::uint8_t code = std::uint8_t(valid_tx << 2 | random_selection << 1 | valid_pool);
    for (std::size_t i = 0; i < kCodes.size(); ++i)
        if (kCodes[i] == code) return static_cast<Behavior>(i);
    return std::nullopt;
}

UnitActions actions_of(Behavior b) {
    const std::uint8_t code = kCodes[static_cast<std::size_t>(b)];
    return {bool(code & 0b100), bool(code & 0b010), bool(code & 0b001)};
}

BehaviorSet BehaviorSet::parse(std::string_view letters) {
    BehaviorSet s;
    for (char c : letters) {
        auto b = behavior_from_char(c);
        if (!b) throw std::invalid_argument(std::string("unknown behavior '") + c + "'");
        if (s.contains(*b))
            throw std::invalid_argument(std::string("duplicate behavior '") + c + "'");
        s.insert(*b);
    }
    return s;
}

int BehaviorSet::size() const { return std::popcount(mask_); }

std::vector<Behavior> BehaviorSet::members() const {
    std::vector<Behavior> out;
    for (Behavior b : kAllBehaviors)
        if (contains(b)) out.push_back(b);
    return out;
}

std::string BehaviorSet::str() const {
    std::string s;
    for (Behavior b : members()) s += to_char(b);
    return s;
}

std::string_view to_string(AttackKind k) {
    switch (k) {
    case AttackKind::parasite: return "PS";
    case AttackKind::double_spend: return "DS";
    case AttackKind::hybrid: return "HB";
    case AttackKind::not_an_attack: return "none";
    }
    return "?";
}

BehaviorSet confusion_stage() { return BehaviorSet::parse("a"); }
BehaviorSet invalid_sending_stage() { return BehaviorSet::parse("def"); }
BehaviorSet invalid_verifying_stage() { return BehaviorSet::parse("be"); }
BehaviorSet overlapping_stage() { return BehaviorSet::parse("cf"); }

PhiDecision phi_decision(BehaviorSet behaviors) {
    auto mask = [&](BehaviorSet stage) { return BehaviorSet(behaviors.mask() & stage.mask()); };
    return {behaviors.contains(Behavior::a), mask(invalid_sending_stage()),
            mask(invalid_verifying_stage()), mask(overlapping_stage())};
}

AttackKind classify_strategy(BehaviorSet behaviors) {
    if (behaviors.empty()) throw std::invalid_argument("classify_strategy: empty behavior set");

    for (AttackKind k : {AttackKind::parasite, AttackKind::double_spend, AttackKind::hybrid})
        if (derivable(k).contains(behaviors)) return k;

    // Sets that send and verify invalid transactions without any selfish
    // behaviour but use more than one behaviour per stage (bde, abde).
    const PhiDecision phi = phi_decision(behaviors);
    if (is_subset(behaviors, BehaviorSet::parse("abde")) && !phi.sends_invalid.empty() &&
        !phi.verifies_invalid.empty())
        return AttackKind::double_spend;

    return AttackKind::not_an_attack;
}

std::vector<BehaviorSet> reference_strategies(AttackKind kind) {
    switch (kind) {
    case AttackKind::parasite: return parse_list("c,ac");
    case AttackKind::double_spend: return parse_list("e,ae,bd,de,abd,ade,bde,abde");
    case AttackKind::hybrid:
        return parse_list(
            "ce,bf,ef,cef,bcf,bef,bce,def,cde,bdf,bcd,aef,acef,abf,abcf,ace,"
            "abef,abce,adef,acde,abdf,abcd");
    default: return {};
    }
}

int reference_count(AttackKind kind) {
    switch (kind) {
    case AttackKind::parasite: return 2;
    case AttackKind::double_spend: return 7;
    case AttackKind::hybrid: return 22;
    default: return 0;
    }
}

StrategyEnumeration enumerate_strategies() {
    StrategyEnumeration out;
    for (AttackKind k : {AttackKind::parasite, AttackKind::double_spend, AttackKind::hybrid,
                         AttackKind::not_an_attack})
        out.buckets[k];

    for (unsigned m = 1; m < 64; ++m) {
        const BehaviorSet s(static_cast<std::uint8_t>(m));
        out.buckets[classify_strategy(s)].push_back(s);
    }
    for (auto& [kind, sets] : out.buckets)
        std::sort(sets.begin(), sets.end(), [](BehaviorSet x, BehaviorSet y) {
            return std::pair(x.size(), x.str()) < std::pair(y.size(), y.str());
        });

    for (AttackKind k : {AttackKind::parasite, AttackKind::double_spend, AttackKind::hybrid}) {
        const auto listed = reference_strategies(k);
        const auto& bucket = out.buckets[k];
        const std::string name(to_string(k));

        if (static_cast<int>(listed.size()) != reference_count(k))
            out.report.push_back(name + ": table lists " + std::to_string(listed.size()) +
                                 " strategies under a printed count of " +
                                 std::to_string(reference_count(k)) + " (" + join(listed) + ")");

        std::vector<BehaviorSet> extra, missing, off_slot;
        for (BehaviorSet s : bucket)
            if (std::find(listed.begin(), listed.end(), s) == listed.end()) extra.push_back(s);
        for (BehaviorSet s : listed) {
            if (std::find(bucket.begin(), bucket.end(), s) == bucket.end()) missing.push_back(s);
            if (!derivable(k).contains(s)) off_slot.push_back(s);
        }
        if (!extra.empty())
            out.report.push_back(name + ": classified but not listed: " + join(extra));
        if (!missing.empty())
            out.report.push_back(name + ": listed but not classified as " + name + ": " +
                                 join(missing));
        if (!off_slot.empty())
            out.report.push_back(name + ": listed but not a one-behaviour-per-stage union: " +
                                 join(off_slot));
    }
    return out;
}

AttackStrategy AttackStrategy::parse(std::string_view behaviors, std::string_view ratio) {
    if (behaviors.empty()) throw std::invalid_argument("strategy: no behaviors given");

    AttackStrategy s;
    for (char c : behaviors) {
        auto b = behavior_from_char(c);
        if (!b) throw std::invalid_argument(std::string("strategy: unknown behavior '") + c + "'");
        if (!s.behaviors_.empty() && *b <= s.behaviors_.back())
            throw std::invalid_argument("strategy: behaviors must be distinct and alphabetical: " +
                                        std::string(behaviors));
        s.behaviors_.push_back(*b);
    }

    if (s.behaviors_.size() == 1 && (ratio.empty() || ratio == "-")) {
        s.ratio_ = {kRatioTotal};
    } else {
        std::size_t start = 0;
        while (start <= ratio.size()) {
            std::size_t end = ratio.find(':', start);
            if (end == std::string_view::npos) end = ratio.size();
            const auto part = ratio.substr(start, end - start);
            int v = 0;
            auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
            if (ec != std::errc() || ptr != part.data() + part.size() || part.empty())
                throw std::invalid_argument("strategy: malformed ratio '" + std::string(ratio) + "'");
            if (v <= 0)
                throw std::invalid_argument("strategy: ratio entries must be positive");
            s.ratio_.push_back(v);
            start = end + 1;
        }
    }

    if (s.ratio_.size() != s.behaviors_.size())
        throw std::invalid_argument("strategy: ratio '" + std::string(ratio) + "' has " +
                                    std::to_string(s.ratio_.size()) + " entries for " +
                                    std::to_string(s.behaviors_.size()) + " behaviors");
    const int sum = std::accumulate(s.ratio_.begin(), s.ratio_.end(), 0);
    if (sum != kRatioTotal)
        throw std::invalid_argument("strategy: ratio '" + std::string(ratio) + "' sums to " +
                                    std::to_string(sum) + ", expected " +
                                    std::to_string(kRatioTotal));

    s.kind_ = classify_strategy(s.behavior_set());
    if (s.kind_ == AttackKind::not_an_attack)
        throw std::invalid_argument("strategy: '" + std::string(behaviors) +
                                    "' is not a PS, DS or HB strategy");
    return s;
}

BehaviorSet AttackStrategy::behavior_set() const {
    BehaviorSet set;
    for (Behavior b : behaviors_) set.insert(b);
    return set;
}

std::string AttackStrategy::behaviors_str() const { return behavior_set().str(); }

std::string AttackStrategy::ratio_str() const {
    std::string s;
    for (int r : ratio_) {
        if (!s.empty()) s += ':';
        s += std::to_string(r);
    }
    return s;
}

Behavior AttackStrategy::sample(Rng& rng) const {
    int u = std::uniform_int_distribution<int>(0, kRatioTotal - 1)(rng);
    for (std::size_t i = 0; i < behaviors_.size(); ++i) {
        if (u < ratio_[i]) return behaviors_[i];
        u -= ratio_[i];
    }
    return behaviors_.back();
}

}  // namespace tanglesim
