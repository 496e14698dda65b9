#include "storyline/drawing.hpp"

#include <algorithm>
#include <stdexcept>

#include "storyline/error.hpp"

namespace storyline {

namespace {

// pos[c] = index of c in pi, -1 if absent.
std::vector<int> position_map(std::span<const char_id> pi, std::size_t min_size = 0) {
    char_id max_id = -1;
    for (char_id c : pi) {
        if (c < 0) throw std::invalid_argument("negative character id in permutation");
        max_id = std::max(max_id, c);
    }
    std::vector<int> pos(std::max<std::size_t>(min_size, static_cast<std::size_t>(max_id + 1)),
                         -1);
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (pos[pi[i]] >= 0) throw std::invalid_argument("duplicate element in permutation");
        pos[pi[i]] = static_cast<int>(i);
    }
    return pos;
}

std::int64_t merge_count(std::vector<int> &a, std::vector<int> &buf, std::size_t lo,
                         std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::int64_t inv = merge_count(a, buf, lo, mid) + merge_count(a, buf, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (a[j] < a[i]) {
            inv += static_cast<std::int64_t>(mid - i);
            buf[k++] = a[j++];
        } else {
            buf[k++] = a[i++];
        }
    }
    while (i < mid) buf[k++] = a[i++];
    while (j < hi) buf[k++] = a[j++];
    std::copy(buf.begin() + lo, buf.begin() + hi, a.begin() + lo);
    return inv;
}

}  // namespace

std::int64_t count_inversions(std::vector<int> seq) {
    std::vector<int> buf(seq.size());
    return merge_count(seq, buf, 0, seq.size());
}

std::int64_t crossings_between(std::span<const char_id> pi, std::span<const char_id> rho) {
    const auto pos_rho = position_map(rho);
    position_map(pi);  // duplicate check
    std::vector<int> seq;
    seq.reserve(std::min(pi.size(), rho.size()));
    for (char_id c : pi)
        if (static_cast<std::size_t>(c) < pos_rho.size() && pos_rho[c] >= 0)
            seq.push_back(pos_rho[c]);
    return count_inversions(std::move(seq));
}

std::int64_t crossings_restricted(std::span<const char_id> pi, std::span<const char_id> rho,
                                  std::span<const char_id> xs, std::span<const char_id> ys) {
    const auto pos_pi = position_map(pi);
    const auto pos_rho = position_map(rho);
    auto check = [&](char_id c) {
        if (c < 0 || static_cast<std::size_t>(c) >= pos_pi.size() || pos_pi[c] < 0 ||
            static_cast<std::size_t>(c) >= pos_rho.size() || pos_rho[c] < 0)
            throw std::invalid_argument("crossings_restricted: character " + std::to_string(c) +
                                        " is not in both permutations");
    };
    for (char_id c : xs) check(c);
    for (char_id c : ys) check(c);

    std::vector<char> in_x(pos_pi.size(), 0), in_y(pos_pi.size(), 0);
    for (char_id c : xs) in_x[c] = 1;
    for (char_id c : ys) in_y[c] = 1;

    // Union of both sets; each unordered pair is visited once.
    std::vector<char_id> members;
    for (std::size_t c = 0; c < pos_pi.size(); ++c)
        if (in_x[c] || in_y[c]) members.push_back(static_cast<char_id>(c));

    std::int64_t count = 0;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            const char_id a = members[i], b = members[j];
            if (!((in_x[a] && in_y[b]) || (in_y[a] && in_x[b]))) continue;
            if ((pos_pi[a] < pos_pi[b]) != (pos_rho[a] < pos_rho[b])) ++count;
        }
    return count;
}

permutation restrict_to(std::span<const char_id> pi, std::span<const char_id> keep) {
    char_id max_id = -1;
    for (char_id c : keep) max_id = std::max(max_id, c);
    std::vector<char> mark(static_cast<std::size_t>(max_id + 1), 0);
    for (char_id c : keep) mark[c] = 1;
    permutation out;
    for (char_id c : pi)
        if (c >= 0 && c <= max_id && mark[c]) out.push_back(c);
    return out;
}

std::vector<violation> validate(const instance &inst, const drawing &d) {
    std::vector<violation> out;
    const int layers = inst.num_layers();
    if (static_cast<int>(d.layers.size()) != layers) {
        out.push_back({violation_kind::layer_count, -1, -1, -1,
                       "drawing has " + std::to_string(d.layers.size()) + " layers, instance has " +
                           std::to_string(layers)});
        return out;
    }
    const int n = inst.num_chars();
    for (int t = 0; t < layers; ++t) {
        const auto &pi = d.layers[t];
        const std::string where = " at layer " + std::to_string(t + 1);
        std::vector<int> pos(n, -1);
        for (std::size_t i = 0; i < pi.size(); ++i) {
            const char_id c = pi[i];
            if (c < 0 || c >= n || !inst.is_active(c, t)) {
                out.push_back({violation_kind::unknown_character, t, c, -1,
                               "character " + std::to_string(c) + " is not active" + where});
                continue;
            }
            if (pos[c] >= 0) {
                out.push_back({violation_kind::duplicate_character, t, c, -1,
                               "character " + std::to_string(c) + " appears twice" + where});
                continue;
            }
            pos[c] = static_cast<int>(i);
        }
        for (char_id c = 0; c < n; ++c)
            if (inst.is_active(c, t) && pos[c] < 0)
                out.push_back({violation_kind::missing_character, t, c, -1,
                               "active character " + std::to_string(c) + " is missing" + where});
        for (int k : inst.interactions_at(t)) {
            const auto &chars = inst.interaction_at(k).chars;
            int lo = static_cast<int>(pi.size()), hi = -1;
            bool complete = true;
            for (char_id c : chars) {
                if (pos[c] < 0) {
                    complete = false;
                    continue;
                }
                lo = std::min(lo, pos[c]);
                hi = std::max(hi, pos[c]);
            }
            if (complete && hi - lo + 1 != static_cast<int>(chars.size()))
                out.push_back({violation_kind::split_interaction, t, -1, k,
                               "interaction " + std::to_string(k) + " is not consecutive" + where});
        }
    }
    return out;
}

void require_valid(const instance &inst, const drawing &d) {
    const auto v = validate(inst, d);
    if (!v.empty()) throw invalid_drawing(v.front().message);
}

std::int64_t gap_crossings(const drawing &d, int gap) {
    return crossings_between(d.layers.at(gap), d.layers.at(gap + 1));
}

crossing_count total_crossings(const instance &inst, const drawing &d) {
    require_valid(inst, d);
    crossing_count cc;
    const int layers = inst.num_layers();
    cc.per_gap.reserve(layers > 0 ? layers - 1 : 0);
    for (int i = 0; i + 1 < layers; ++i) {
        // Characters present in both layers are exactly AC(t_i) ∩ AC(t_i+1).
        cc.per_gap.push_back(gap_crossings(d, i));
        cc.total += cc.per_gap.back();
    }
    return cc;
}

}  // namespace storyline
