#ifndef STORYLINE_INSTANCE_HPP
#define STORYLINE_INSTANCE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace storyline {

/// Dense character index, 0..num_chars()-1.
using char_id = std::int32_t;

/// Characters listed top to bottom.
using permutation = std::vector<char_id>;

struct interaction {
    int time = 0;                ///< 0-based layer
    std::vector<char_id> chars;  ///< sorted ascending, nonempty

    bool operator==(const interaction &) const = default;
};

/// Inclusive range of 0-based layers.
struct activity_interval {
    int start = 0;
    int end = 0;

    bool contains(int layer) const noexcept { return start <= layer && layer <= end; }
    bool operator==(const activity_interval &) const = default;
};

struct character {
    std::int64_t label = 0;  ///< identifier used in files
    std::string name;

    bool operator==(const character &) const = default;
};

struct instance_options {
    /// Remove layers without interactions (and characters left with no layer).
    bool drop_empty_layers = false;
};

/// A storyline instance: ordered layers, characters with activity
/// intervals, and interactions. Immutable once built.
class instance {
   public:
    /// Validates and builds an instance. When `activity` is empty each
    /// character is active from its first to its last interaction.
    /// Throws invalid_instance naming the violated invariant.
    static instance build(int num_layers, std::vector<character> chars,
                          std::vector<interaction> interactions,
                          std::optional<std::vector<activity_interval>> activity = std::nullopt,
                          const instance_options &opts = {});

    int num_layers() const noexcept { return num_layers_; }
    int num_chars() const noexcept { return static_cast<int>(chars_.size()); }
    int num_interactions() const noexcept { return static_cast<int>(interactions_.size()); }

    const std::vector<character> &characters() const noexcept { return chars_; }
    const character &character_info(char_id c) const { return chars_.at(c); }
    const std::vector<interaction> &interactions() const noexcept { return interactions_; }
    const interaction &interaction_at(int index) const { return interactions_.at(index); }
    const std::vector<activity_interval> &activity() const noexcept { return activity_; }
    const activity_interval &activity(char_id c) const { return activity_.at(c); }

    /// Indices into interactions() of the interactions at `layer`, in list order.
    std::span<const int> interactions_at(int layer) const;

    bool is_active(char_id c, int layer) const noexcept {
        return activity_[c].contains(layer);
    }

    /// AC(t): characters active at `layer`, ascending. Throws std::out_of_range.
    std::vector<char_id> active_chars(int layer) const;

    /// Characters active at every layer of [first, last], ascending.
    /// Throws std::invalid_argument when first > last.
    std::vector<char_id> active_interval(int first, int last) const;

    /// CI(t): characters taking part in some interaction at `layer`, ascending.
    std::vector<char_id> interacting_chars(int layer) const;

    /// Index of the interaction containing `c` at `layer`, or -1.
    int interaction_of(char_id c, int layer) const;

    bool operator==(const instance &other) const;

   private:
    int num_layers_ = 0;
    std::vector<character> chars_;
    std::vector<interaction> interactions_;
    std::vector<activity_interval> activity_;
    std::vector<std::vector<int>> by_layer_;
    // membership_[layer][c] = interaction index or -1
    std::vector<std::vector<int>> membership_;

    void check_layer(int layer) const;
};

}  // namespace storyline

#endif  // STORYLINE_INSTANCE_HPP
