#include <algorithm>
#include <bit>
#include <limits>
#include <unordered_map>

#include "storyline/error.hpp"
#include "storyline/solver.hpp"

namespace storyline {

namespace {

constexpr std::int64_t saturate = std::numeric_limits<std::int64_t>::max();

std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > saturate / b) return saturate;
    return a * b;
}

std::int64_t factorial(std::int64_t k) {
    std::int64_t f = 1;
    for (std::int64_t i = 2; i <= k; ++i) f = sat_mul(f, i);
    return f;
}

// Blocks of a layer: each interaction (members ascending) and each free character.
std::vector<std::vector<char_id>> layer_units(const instance &inst, int layer) {
    std::vector<std::vector<char_id>> units;
    for (int k : inst.interactions_at(layer)) units.push_back(inst.interaction_at(k).chars);
    for (char_id c : inst.active_chars(layer))
        if (inst.interaction_of(c, layer) < 0) units.push_back({c});
    return units;
}

// Bit p of the key is set when the p-th pair (i < j) of `common` is in order.
using pair_key = std::uint64_t;
constexpr std::size_t max_key_chars = 11;  // 55 pairs

pair_key order_key(const permutation &pi, const std::vector<char_id> &common,
                   std::vector<int> &pos) {
    for (std::size_t i = 0; i < pi.size(); ++i) pos[pi[i]] = static_cast<int>(i);
    pair_key key = 0;
    int bit = 0;
    for (std::size_t i = 0; i < common.size(); ++i)
        for (std::size_t j = i + 1; j < common.size(); ++j, ++bit)
            if (pos[common[i]] < pos[common[j]]) key |= pair_key{1} << bit;
    return key;
}

}  // namespace

std::int64_t count_feasible_permutations(const instance &inst, int layer) {
    const auto units = layer_units(inst, layer);
    std::int64_t count = factorial(static_cast<std::int64_t>(units.size()));
    for (const auto &u : units) count = sat_mul(count, factorial(static_cast<std::int64_t>(u.size())));
    return count;
}

std::vector<permutation> feasible_permutations(const instance &inst, int layer) {
    auto units = layer_units(inst, layer);
    std::vector<permutation> out;
    std::vector<int> order(units.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    // Every internal order of every unit, combined with every unit order.
    std::vector<std::vector<permutation>> internal(units.size());
    for (std::size_t u = 0; u < units.size(); ++u) {
        auto members = units[u];
        do internal[u].push_back(members);
        while (std::next_permutation(members.begin(), members.end()));
    }
    std::vector<std::size_t> choice(units.size(), 0);
    do {
        std::fill(choice.begin(), choice.end(), 0);
        while (true) {
            permutation pi;
            for (int u : order) {
                const auto &m = internal[u][choice[u]];
                pi.insert(pi.end(), m.begin(), m.end());
            }
            out.push_back(std::move(pi));
            std::size_t u = 0;
            while (u < choice.size() && ++choice[u] == internal[u].size()) choice[u++] = 0;
            if (u == choice.size()) break;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    std::sort(out.begin(), out.end());
    return out;
}

bruteforce_result solve_bruteforce(const instance &inst, std::int64_t budget) {
    const int layers = inst.num_layers();
    std::vector<std::int64_t> sizes(layers);
    for (int t = 0; t < layers; ++t) sizes[t] = count_feasible_permutations(inst, t);
    std::int64_t work = layers == 1 ? sizes[0] : 0;
    for (int t = 0; t + 1 < layers; ++t) {
        const auto step = sat_mul(sizes[t], sizes[t + 1]);
        work = step > saturate - work ? saturate : work + step;
    }
    if (work > budget)
        throw budget_exceeded("exhaustive search needs " + std::to_string(work) +
                              " transitions, budget is " + std::to_string(budget));

    std::vector<std::vector<permutation>> perms(layers);
    for (int t = 0; t < layers; ++t) perms[t] = feasible_permutations(inst, t);

    std::vector<std::vector<std::int64_t>> cost(layers);
    std::vector<std::vector<int>> parent(layers);
    cost[0].assign(perms[0].size(), 0);
    std::vector<int> pos(inst.num_chars(), -1);

    for (int t = 0; t + 1 < layers; ++t) {
        const auto &from = perms[t];
        const auto &to = perms[t + 1];
        cost[t + 1].assign(to.size(), saturate);
        parent[t + 1].assign(to.size(), -1);
        const auto common = inst.active_interval(t, t + 1);
        if (common.size() <= max_key_chars) {
            // Group the previous layer by its order on the common characters;
            // a transition then costs the number of differing pair bits.
            std::unordered_map<pair_key, std::pair<std::int64_t, int>> best;
            for (std::size_t a = 0; a < from.size(); ++a) {
                const auto key = order_key(from[a], common, pos);
                auto [it, fresh] = best.try_emplace(key, cost[t][a], static_cast<int>(a));
                if (!fresh && cost[t][a] < it->second.first) it->second = {cost[t][a], static_cast<int>(a)};
            }
            std::vector<std::pair<pair_key, std::pair<std::int64_t, int>>> groups(best.begin(), best.end());
            std::sort(groups.begin(), groups.end(),
                      [](const auto &x, const auto &y) { return x.second.second < y.second.second; });
            for (std::size_t b = 0; b < to.size(); ++b) {
                const auto key = order_key(to[b], common, pos);
                for (const auto &[k, entry] : groups) {
                    const std::int64_t c = entry.first + std::popcount(k ^ key);
                    if (c < cost[t + 1][b]) {
                        cost[t + 1][b] = c;
                        parent[t + 1][b] = entry.second;
                    }
                }
            }
        } else {
            for (std::size_t b = 0; b < to.size(); ++b)
                for (std::size_t a = 0; a < from.size(); ++a) {
                    const std::int64_t c = cost[t][a] + crossings_between(from[a], to[b]);
                    if (c < cost[t + 1][b]) {
                        cost[t + 1][b] = c;
                        parent[t + 1][b] = static_cast<int>(a);
                    }
                }
        }
    }

    const auto &last = cost[layers - 1];
    int at = static_cast<int>(std::min_element(last.begin(), last.end()) - last.begin());
    bruteforce_result res;
    res.crossings = last[at];
    res.d.layers.resize(layers);
    for (int t = layers - 1; t >= 0; --t) {
        res.d.layers[t] = perms[t][at];
        if (t > 0) at = parent[t][at];
    }
    return res;
}

}  // namespace storyline
