#ifndef STORYLINE_CONSISTENCY_HPP
#define STORYLINE_CONSISTENCY_HPP

#include <span>
#include <vector>

#include "storyline/drawing.hpp"
#include "storyline/instance.hpp"

namespace storyline {

/// Reorders the members of `phi` inside `pi`: elements of `pi` not in `phi`
/// keep their slots, and the slots held by phi's elements are refilled in
/// phi's order. Throws std::invalid_argument unless phi's elements are a
/// subset of pi's.
permutation assign(std::span<const char_id> pi, std::span<const char_id> phi);

/// True when at `layer` the set `chars` is either untouched by interactions
/// or contained in a single interaction.
bool kept_together(const instance &inst, std::span<const char_id> chars, int layer);

/// Earliest layer j <= time(I) such that char(I) stays active on [j, time(I)]
/// and is kept together on every layer of (j, time(I)].
int anchor_layer(const instance &inst, int interaction);

struct type1_violation {
    int interaction;
    int layer;  ///< a layer in [anchor, time) whose order of char(I) differs

    bool operator==(const type1_violation &) const = default;
};

/// Two interactions with the same characters whose cast is kept together on
/// every layer strictly between them. time(first) < time(second).
struct type2_pair {
    int first;
    int second;

    bool operator==(const type2_pair &) const = default;
};

struct type2_violation {
    type2_pair pair;
    int layer;  ///< intermediate layer where the cast is not a contiguous copy

    bool operator==(const type2_violation &) const = default;
};

struct consistency_report {
    std::vector<type1_violation> type1;
    std::vector<type2_violation> type2;

    bool type1_consistent() const noexcept { return type1.empty(); }
    bool type2_consistent() const noexcept { return type2.empty(); }
    bool consistent() const noexcept { return type1.empty() && type2.empty(); }
};

/// Every type-2 pair of the instance, ordered by (time(first), time(second), first).
std::vector<type2_pair> qualifying_pairs(const instance &inst);

std::vector<type1_violation> type1_violations(const instance &inst, const drawing &d);
std::vector<type2_violation> type2_violations(const instance &inst, const drawing &d);
consistency_report check_consistency(const instance &inst, const drawing &d);

/// Makes the drawing type-1-consistent without adding crossings.
/// Violating interactions are fixed latest first (ties: list order) by
/// copying the order of char(I) at the anchor layer forward to time(I).
drawing repair_type1(const instance &inst, const drawing &d);

/// Makes the drawing type-2-consistent without adding crossings. For the
/// violating pair of largest span, the cast is re-inserted as one block at
/// the position of its member with the fewest crossings against outsiders
/// (ties: smallest id) on each layer after the first interaction.
drawing repair_type2(const instance &inst, const drawing &d);

/// Alternates both repairs until the drawing is type-1- and type-2-consistent.
drawing make_consistent(const instance &inst, const drawing &d);

}  // namespace storyline

#endif  // STORYLINE_CONSISTENCY_HPP
