#include "storyline/instance.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "storyline/error.hpp"

namespace storyline {

namespace {

std::string char_name(const std::vector<character> &chars, char_id c) {
    if (c >= 0 && c < static_cast<char_id>(chars.size()) && !chars[c].name.empty())
        return "'" + chars[c].name + "'";
    return "#" + std::to_string(c);
}

// Removes layers without interactions, remapping times and clipping activity.
void drop_empty_layers(int &num_layers, std::vector<character> &chars,
                       std::vector<interaction> &interactions,
                       std::vector<activity_interval> &activity) {
    std::vector<int> new_index(num_layers, -1);
    std::vector<bool> used(num_layers, false);
    for (const auto &inter : interactions)
        if (inter.time >= 0 && inter.time < num_layers) used[inter.time] = true;
    int kept = 0;
    for (int t = 0; t < num_layers; ++t)
        if (used[t]) new_index[t] = kept++;
    if (kept == num_layers) return;

    std::vector<char_id> new_char(chars.size(), -1);
    std::vector<character> kept_chars;
    std::vector<activity_interval> kept_activity;
    for (std::size_t c = 0; c < chars.size(); ++c) {
        int lo = -1, hi = -1;
        for (int t = activity[c].start; t <= activity[c].end; ++t) {
            if (t < 0 || t >= num_layers || new_index[t] < 0) continue;
            if (lo < 0) lo = new_index[t];
            hi = new_index[t];
        }
        if (lo < 0) continue;
        new_char[c] = static_cast<char_id>(kept_chars.size());
        kept_chars.push_back(chars[c]);
        kept_activity.push_back({lo, hi});
    }
    for (auto &inter : interactions) {
        inter.time = new_index[inter.time];
        for (auto &c : inter.chars) c = new_char.at(c);
    }
    num_layers = kept;
    chars = std::move(kept_chars);
    activity = std::move(kept_activity);
}

}  // namespace

instance instance::build(int num_layers, std::vector<character> chars,
                         std::vector<interaction> interactions,
                         std::optional<std::vector<activity_interval>> activity,
                         const instance_options &opts) {
    if (num_layers < 1) throw invalid_instance("instance needs at least one layer");
    const auto n = static_cast<char_id>(chars.size());
    if (n < 1) throw invalid_instance("instance needs at least one character");

    for (std::size_t k = 0; k < interactions.size(); ++k) {
        auto &inter = interactions[k];
        if (inter.time < 0 || inter.time >= num_layers)
            throw invalid_instance("interaction " + std::to_string(k) + " has time " +
                                   std::to_string(inter.time + 1) + " outside layers 1.." +
                                   std::to_string(num_layers));
        if (inter.chars.empty())
            throw invalid_instance("interaction " + std::to_string(k) + " has no characters");
        std::sort(inter.chars.begin(), inter.chars.end());
        if (std::adjacent_find(inter.chars.begin(), inter.chars.end()) != inter.chars.end())
            throw invalid_instance("interaction " + std::to_string(k) +
                                   " lists a character twice");
        if (inter.chars.front() < 0 || inter.chars.back() >= n)
            throw invalid_instance("interaction " + std::to_string(k) +
                                   " references an unknown character");
    }

    std::vector<activity_interval> act;
    if (activity) {
        act = std::move(*activity);
        if (act.size() != chars.size())
            throw invalid_instance("activity must list one interval per character");
    } else {
        act.assign(n, {-1, -1});
        for (const auto &inter : interactions)
            for (char_id c : inter.chars) {
                auto &a = act[c];
                if (a.start < 0 || inter.time < a.start) a.start = inter.time;
                if (a.end < 0 || inter.time > a.end) a.end = inter.time;
            }
        for (char_id c = 0; c < n; ++c)
            if (act[c].start < 0)
                throw invalid_instance("character " + char_name(chars, c) +
                                       " has no interactions and no activity interval");
    }
    for (char_id c = 0; c < n; ++c) {
        const auto &a = act[c];
        if (a.start < 0 || a.end >= num_layers || a.start > a.end)
            throw invalid_instance("activity of character " + char_name(chars, c) +
                                   " is not a consecutive range of layers");
    }

    if (opts.drop_empty_layers) drop_empty_layers(num_layers, chars, interactions, act);

    instance inst;
    inst.num_layers_ = num_layers;
    inst.chars_ = std::move(chars);
    inst.interactions_ = std::move(interactions);
    inst.activity_ = std::move(act);
    const auto nc = inst.num_chars();
    inst.by_layer_.assign(num_layers, {});
    inst.membership_.assign(num_layers, std::vector<int>(nc, -1));

    for (std::size_t k = 0; k < inst.interactions_.size(); ++k) {
        const auto &inter = inst.interactions_[k];
        inst.by_layer_[inter.time].push_back(static_cast<int>(k));
        for (char_id c : inter.chars) {
            if (!inst.activity_[c].contains(inter.time))
                throw invalid_instance("interaction " + std::to_string(k) + " contains character " +
                                       char_name(inst.chars_, c) + " which is not active at layer " +
                                       std::to_string(inter.time + 1));
            int &slot = inst.membership_[inter.time][c];
            if (slot >= 0)
                throw invalid_instance("interactions " + std::to_string(slot) + " and " +
                                       std::to_string(k) + " share character " +
                                       char_name(inst.chars_, c) + " at layer " +
                                       std::to_string(inter.time + 1));
            slot = static_cast<int>(k);
        }
    }
    for (int t = 0; t < num_layers; ++t) {
        bool any = false;
        for (const auto &a : inst.activity_) any = any || a.contains(t);
        if (!any)
            throw invalid_instance("layer " + std::to_string(t + 1) + " has no active character");
    }
    return inst;
}

void instance::check_layer(int layer) const {
    if (layer < 0 || layer >= num_layers_)
        throw std::out_of_range("layer " + std::to_string(layer) + " out of range");
}

std::span<const int> instance::interactions_at(int layer) const {
    check_layer(layer);
    return by_layer_[layer];
}

std::vector<char_id> instance::active_chars(int layer) const {
    check_layer(layer);
    std::vector<char_id> out;
    for (char_id c = 0; c < num_chars(); ++c)
        if (activity_[c].contains(layer)) out.push_back(c);
    return out;
}

std::vector<char_id> instance::active_interval(int first, int last) const {
    if (first > last) throw std::invalid_argument("active_interval: first layer after last");
    check_layer(first);
    check_layer(last);
    std::vector<char_id> out;
    for (char_id c = 0; c < num_chars(); ++c)
        if (activity_[c].start <= first && last <= activity_[c].end) out.push_back(c);
    return out;
}

std::vector<char_id> instance::interacting_chars(int layer) const {
    check_layer(layer);
    std::vector<char_id> out;
    for (char_id c = 0; c < num_chars(); ++c)
        if (membership_[layer][c] >= 0) out.push_back(c);
    return out;
}

int instance::interaction_of(char_id c, int layer) const {
    check_layer(layer);
    if (c < 0 || c >= num_chars()) throw std::out_of_range("character out of range");
    return membership_[layer][c];
}

bool instance::operator==(const instance &other) const {
    return num_layers_ == other.num_layers_ && chars_ == other.chars_ &&
           interactions_ == other.interactions_ && activity_ == other.activity_;
}

}  // namespace storyline
