#include "storyline/consistency.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "storyline/error.hpp"

namespace storyline {

namespace {

bool all_active(const instance &inst, std::span<const char_id> chars, int layer) {
    return std::all_of(chars.begin(), chars.end(),
                       [&](char_id c) { return inst.is_active(c, layer); });
}

// Whether pi contains `block` as a contiguous run in exactly that order.
bool contains_block(std::span<const char_id> pi, std::span<const char_id> block) {
    if (block.empty()) return true;
    auto it = std::find(pi.begin(), pi.end(), block.front());
    if (it == pi.end() || static_cast<std::size_t>(pi.end() - it) < block.size()) return false;
    return std::equal(block.begin(), block.end(), it);
}

int repair_cap(const instance &inst, std::size_t extra = 0) {
    const auto cap = static_cast<std::size_t>(std::max(1, inst.num_interactions())) *
                     static_cast<std::size_t>(inst.num_layers());
    return static_cast<int>(std::max(cap, extra) + 1);
}

}  // namespace

permutation assign(std::span<const char_id> pi, std::span<const char_id> phi) {
    char_id max_id = -1;
    for (char_id c : pi) max_id = std::max(max_id, c);
    std::vector<char> in_phi(static_cast<std::size_t>(max_id + 1), 0);
    for (char_id c : phi) {
        if (c < 0 || c > max_id || std::find(pi.begin(), pi.end(), c) == pi.end())
            throw std::invalid_argument("assign: element " + std::to_string(c) +
                                        " of phi is not in pi");
        if (in_phi[c]) throw std::invalid_argument("assign: phi has duplicate elements");
        in_phi[c] = 1;
    }
    permutation out(pi.begin(), pi.end());
    std::size_t next = 0;
    for (auto &c : out)
        if (in_phi[c]) c = phi[next++];
    return out;
}

bool kept_together(const instance &inst, std::span<const char_id> chars, int layer) {
    int shared = -2;
    for (char_id c : chars) {
        const int k = inst.interaction_of(c, layer);
        if (shared == -2)
            shared = k;
        else if (k != shared)
            return false;
    }
    return true;
}

int anchor_layer(const instance &inst, int interaction) {
    const auto &inter = inst.interaction_at(interaction);
    int j = inter.time;
    while (j > 0 && all_active(inst, inter.chars, j - 1) && kept_together(inst, inter.chars, j))
        --j;
    return j;
}

std::vector<type2_pair> qualifying_pairs(const instance &inst) {
    std::vector<type2_pair> out;
    const auto &inters = inst.interactions();
    const int m = inst.num_interactions();
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            if (inters[a].time >= inters[b].time || inters[a].chars != inters[b].chars) continue;
            bool ok = true;
            for (int k = inters[a].time + 1; ok && k < inters[b].time; ++k)
                ok = kept_together(inst, inters[a].chars, k);
            if (ok) out.push_back({a, b});
        }
    std::sort(out.begin(), out.end(), [&](const type2_pair &x, const type2_pair &y) {
        const auto kx = std::tuple(inters[x.first].time, inters[x.second].time, x.first);
        const auto ky = std::tuple(inters[y.first].time, inters[y.second].time, y.first);
        return kx < ky;
    });
    return out;
}

std::vector<type1_violation> type1_violations(const instance &inst, const drawing &d) {
    require_valid(inst, d);
    std::vector<type1_violation> out;
    for (int k = 0; k < inst.num_interactions(); ++k) {
        const auto &inter = inst.interaction_at(k);
        const auto target = restrict_to(d.layers[inter.time], inter.chars);
        for (int t = anchor_layer(inst, k); t < inter.time; ++t)
            if (restrict_to(d.layers[t], inter.chars) != target) out.push_back({k, t});
    }
    return out;
}

std::vector<type2_violation> type2_violations(const instance &inst, const drawing &d) {
    require_valid(inst, d);
    std::vector<type2_violation> out;
    for (const auto &p : qualifying_pairs(inst)) {
        const auto &a = inst.interaction_at(p.first);
        const auto &b = inst.interaction_at(p.second);
        const auto block = restrict_to(d.layers[a.time], a.chars);
        for (int t = a.time + 1; t < b.time; ++t)
            if (!contains_block(d.layers[t], block)) out.push_back({p, t});
    }
    return out;
}

consistency_report check_consistency(const instance &inst, const drawing &d) {
    return {type1_violations(inst, d), type2_violations(inst, d)};
}

drawing repair_type1(const instance &inst, const drawing &d) {
    drawing out = d;
    const int cap = repair_cap(inst);
    for (int round = 0;; ++round) {
        const auto violations = type1_violations(inst, out);
        if (violations.empty()) return out;
        if (round >= cap) throw std::logic_error("repair_type1 did not reach a fixpoint");
        // Latest interaction first; ties resolved by list order.
        int pick = -1;
        for (const auto &v : violations) {
            if (pick < 0) {
                pick = v.interaction;
                continue;
            }
            const int tp = inst.interaction_at(pick).time;
            const int tv = inst.interaction_at(v.interaction).time;
            if (tv > tp || (tv == tp && v.interaction < pick)) pick = v.interaction;
        }
        const auto &inter = inst.interaction_at(pick);
        const int anchor = anchor_layer(inst, pick);
        const auto order = restrict_to(out.layers[anchor], inter.chars);
        for (int t = anchor + 1; t <= inter.time; ++t) out.layers[t] = assign(out.layers[t], order);
    }
}

drawing repair_type2(const instance &inst, const drawing &d) {
    drawing out = d;
    const int cap = repair_cap(inst, qualifying_pairs(inst).size());
    for (int round = 0;; ++round) {
        const auto violations = type2_violations(inst, out);
        if (violations.empty()) return out;
        if (round >= cap) throw std::logic_error("repair_type2 did not reach a fixpoint");

        auto span_of = [&](const type2_pair &p) {
            return inst.interaction_at(p.second).time - inst.interaction_at(p.first).time;
        };
        type2_pair pick = violations.front().pair;
        for (const auto &v : violations)
            if (span_of(v.pair) > span_of(pick)) pick = v.pair;

        const auto &cast = inst.interaction_at(pick.first).chars;
        const int first = inst.interaction_at(pick.first).time;
        const int last = inst.interaction_at(pick.second).time;

        // Member with fewest crossings against non-members over [first, last].
        char_id best = -1;
        std::int64_t best_cost = 0;
        for (char_id c : cast) {
            std::int64_t cost = 0;
            for (int t = first; t < last; ++t) {
                std::vector<char_id> outsiders;
                for (char_id o : out.layers[t])
                    if (inst.is_active(o, t + 1) &&
                        !std::binary_search(cast.begin(), cast.end(), o))
                        outsiders.push_back(o);
                const char_id single[] = {c};
                cost += crossings_restricted(out.layers[t], out.layers[t + 1], single, outsiders);
            }
            if (best < 0 || cost < best_cost) {
                best = c;
                best_cost = cost;
            }
        }

        const auto block = restrict_to(out.layers[first], cast);
        for (int t = first + 1; t <= last; ++t) {
            permutation rebuilt;
            rebuilt.reserve(out.layers[t].size());
            for (char_id c : out.layers[t]) {
                if (c == best) rebuilt.insert(rebuilt.end(), block.begin(), block.end());
                if (!std::binary_search(cast.begin(), cast.end(), c)) rebuilt.push_back(c);
            }
            out.layers[t] = std::move(rebuilt);
        }
    }
}

drawing make_consistent(const instance &inst, const drawing &d) {
    drawing out = d;
    const int cap = repair_cap(inst);
    for (int round = 0; round < cap; ++round) {
        out = repair_type2(inst, repair_type1(inst, out));
        if (check_consistency(inst, out).consistent()) return out;
    }
    throw std::logic_error("make_consistent did not reach a fixpoint");
}

}  // namespace storyline
