// Layered attack construction.
//
// Three binary unit actions (validity, selection discipline, source pool)
// combine into six feasible atomic behaviours a..f. A strategy is a set of
// behaviours mixed by an integer ratio summing to 10, and falls into the
// parasite (PS), double-spending (DS) or hybrid (HB) family according to the
// staged decision principle:
//
//   (a,-) | (d,e,f,-) | (b,e,-) | (c,f,-)
//
// i.e. optional confusion, invalid sending, invalid verification and the
// selfish/overlapping stage.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tanglesim/tangle_core.hpp"

namespace tanglesim {

// true selects the first option of each action: valid tx (A1), random
// selection (B1), valid pool (C1).
struct UnitActions {
    bool valid_tx = true;
    bool random_selection = true;
    bool valid_pool = true;

    friend bool operator==(const UnitActions&, const UnitActions&) = default;
};

enum class Behavior : std::uint8_t { a, b, c, d, e, f };

inline constexpr std::array<Behavior, 6> kAllBehaviors{
    Behavior::a, Behavior::b, Behavior::c, Behavior::d, Behavior::e, Behavior::f};

char to_char(Behavior b);
std::optional<Behavior> behavior_from_char(char c);

// Returns nullopt for the infeasible triples 100 and 000.
std::optional<Behavior> behavior_from_bits(bool valid_tx, bool random_selection,
                                           bool valid_pool);
UnitActions actions_of(Behavior b);

// Bit i set <=> behaviour ('a' + i) present.
class BehaviorSet {
public:
    BehaviorSet() = default;
    explicit BehaviorSet(std::uint8_t mask) : mask_(mask & 0x3f) {}
    // Parses "abd"-style strings; throws on unknown letters or duplicates.
    static BehaviorSet parse(std::string_view letters);

    bool contains(Behavior b) const { return mask_ >> static_cast<int>(b) & 1u; }
    void insert(Behavior b) { mask_ |= std::uint8_t(1u << static_cast<int>(b)); }
    bool empty() const { return mask_ == 0; }
    int size() const;
    std::uint8_t mask() const { return mask_; }
    std::vector<Behavior> members() const;
    std::string str() const;

    friend bool operator==(BehaviorSet, BehaviorSet) = default;
    friend auto operator<=>(BehaviorSet, BehaviorSet) = default;

private:
    std::uint8_t mask_ = 0;
};

enum class AttackKind : std::uint8_t { parasite, double_spend, hybrid, not_an_attack };

std::string_view to_string(AttackKind k);

// Members of each decision stage.
BehaviorSet confusion_stage();        // {a}
BehaviorSet invalid_sending_stage();  // {d,e,f}
BehaviorSet invalid_verifying_stage();  // {b,e}
BehaviorSet overlapping_stage();      // {c,f}

// Stage-by-stage view of a behaviour set.
struct PhiDecision {
    bool has_confusion = false;
    BehaviorSet sends_invalid;
    BehaviorSet verifies_invalid;
    BehaviorSet overlapping;
};

PhiDecision phi_decision(BehaviorSet behaviors);

// Throws std::invalid_argument on an empty set.
AttackKind classify_strategy(BehaviorSet behaviors);

struct StrategyEnumeration {
    std::map<AttackKind, std::vector<BehaviorSet>> buckets;
    // Human-readable notes where the enumeration departs from the reference
    // strategy table.
    std::vector<std::string> report;
};

StrategyEnumeration enumerate_strategies();

// Reference strategy table rows, as listed.
std::vector<BehaviorSet> reference_strategies(AttackKind kind);
// Count printed next to each row of the reference table.
int reference_count(AttackKind kind);

class AttackStrategy {
public:
    // behaviors: "abd"; ratio: "6:2:2". A single behaviour accepts "-", "" or
    // "10". Letters must be strictly alphabetical; ratio entries bind to them
    // positionally and must be positive and sum to 10.
    static AttackStrategy parse(std::string_view behaviors, std::string_view ratio);

    const std::vector<Behavior>& behaviors() const { return behaviors_; }
    const std::vector<int>& ratio() const { return ratio_; }
    AttackKind kind() const { return kind_; }
    BehaviorSet behavior_set() const;

    std::string behaviors_str() const;
    std::string ratio_str() const;

    Behavior sample(Rng& rng) const;

    friend bool operator==(const AttackStrategy&, const AttackStrategy&) = default;

private:
    std::vector<Behavior> behaviors_;
    std::vector<int> ratio_;
    AttackKind kind_ = AttackKind::not_an_attack;
};

inline constexpr int kRatioTotal = 10;

}  // namespace tanglesim
