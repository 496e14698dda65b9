#ifndef STORYLINE_DRAWING_HPP
#define STORYLINE_DRAWING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "storyline/instance.hpp"

namespace storyline {

/// One permutation of the active characters per layer.
struct drawing {
    std::vector<permutation> layers;

    bool operator==(const drawing &) const = default;
};

struct crossing_count {
    std::int64_t total = 0;
    std::vector<std::int64_t> per_gap;  ///< per_gap[i] counts crossings between layers i and i+1
};

enum class violation_kind {
    layer_count,        ///< wrong number of layers
    unknown_character,  ///< id out of range or inactive at that layer
    duplicate_character,
    missing_character,  ///< an active character is absent
    split_interaction,  ///< interaction members not consecutive
};

struct violation {
    violation_kind kind;
    int layer = -1;
    char_id character = -1;
    int interaction = -1;
    std::string message;
};

/// Lists every reason `d` is not a feasible drawing of `inst`; empty iff feasible.
std::vector<violation> validate(const instance &inst, const drawing &d);

/// Throws invalid_drawing carrying the first violation, if any.
void require_valid(const instance &inst, const drawing &d);

/// Number of inversions between `pi` and `rho` restricted to their common
/// elements, counted in O(k log k). Throws std::invalid_argument on
/// duplicate or negative entries.
std::int64_t crossings_between(std::span<const char_id> pi, std::span<const char_id> rho);

/// Unordered pairs {a, b} with a in `xs` and b in `ys` (a != b) whose order
/// differs between `pi` and `rho`. Every element of xs and ys must occur in
/// both permutations.
std::int64_t crossings_restricted(std::span<const char_id> pi, std::span<const char_id> rho,
                                  std::span<const char_id> xs, std::span<const char_id> ys);

/// Crossings of a valid drawing. Throws invalid_drawing otherwise.
crossing_count total_crossings(const instance &inst, const drawing &d);

/// Crossings between layers `gap` and `gap + 1` without validation.
std::int64_t gap_crossings(const drawing &d, int gap);

/// `pi` restricted to the members of `keep` (any order), preserving pi's order.
permutation restrict_to(std::span<const char_id> pi, std::span<const char_id> keep);

/// Merge-based inversion count of an integer sequence.
std::int64_t count_inversions(std::vector<int> seq);

}  // namespace storyline

#endif  // STORYLINE_DRAWING_HPP
