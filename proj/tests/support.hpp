// Test-only generators and reference implementations. Everything here is
// written from the problem definition, without calling the library code
// it is used to check.
#ifndef STORYLINE_TESTS_SUPPORT_HPP
#define STORYLINE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "storyline/drawing.hpp"
#include "storyline/generate.hpp"
#include "storyline/instance.hpp"

namespace testsupport {

using storyline::char_id;
using storyline::drawing;
using storyline::instance;
using storyline::permutation;

using rng_t = std::mt19937_64;

inline int uniform(rng_t &rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline void shuffle(std::vector<char_id> &v, rng_t &rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

// Parameters of the i-th small corpus instance: n <= 6, layers <= 8.
inline storyline::generator_params small_params(std::uint64_t i) {
    rng_t rng(0x5eed0000 + i);
    storyline::generator_params p;
    p.chars = uniform(rng, 2, 6);
    p.layers = uniform(rng, 2, 8);
    p.max_size = uniform(rng, 1, std::min(4, p.chars));
    p.min_size = uniform(rng, 1, std::min(2, p.max_size));
    p.max_interactions = uniform(rng, 1, 3);
    p.min_interactions = 1;
    p.repeat = (i % 3 == 0) ? 0.4 : 0.0;
    return p;
}

inline instance small_instance(std::uint64_t i) {
    return storyline::generate_instance(small_params(i), 1000 + i);
}

// Random instance with explicit activity that sometimes outlasts the
// interactions, so characters can be active without interacting.
inline instance padded_instance(rng_t &rng, int n, int layers) {
    storyline::generator_params p;
    p.chars = n;
    p.layers = layers;
    p.max_size = std::min(n, 3);
    p.max_interactions = 2;
    const auto base = storyline::generate_instance(p, rng());
    std::vector<storyline::activity_interval> act;
    for (char_id c = 0; c < n; ++c) {
        auto a = base.activity(c);
        if (rng() % 2) a.start = uniform(rng, 0, a.start);
        if (rng() % 2) a.end = uniform(rng, a.end, layers - 1);
        act.push_back(a);
    }
    return instance::build(layers, base.characters(), base.interactions(), act);
}

// Active characters of a layer straight from the activity intervals.
inline std::vector<char_id> active_at(const instance &inst, int t) {
    std::vector<char_id> out;
    for (char_id c = 0; c < inst.num_chars(); ++c)
        if (inst.activity(c).start <= t && t <= inst.activity(c).end) out.push_back(c);
    return out;
}

// Uniform over block orders and internal orders: interactions are blocks,
// every other active character is a block of its own.
inline permutation random_layer(const instance &inst, int t, rng_t &rng) {
    std::vector<std::vector<char_id>> blocks;
    std::vector<char> taken(inst.num_chars(), 0);
    for (const auto &inter : inst.interactions())
        if (inter.time == t) {
            blocks.push_back(inter.chars);
            for (char_id c : inter.chars) taken[c] = 1;
        }
    for (char_id c : active_at(inst, t))
        if (!taken[c]) blocks.push_back({c});
    for (std::size_t i = blocks.size(); i > 1; --i) std::swap(blocks[i - 1], blocks[rng() % i]);
    permutation pi;
    for (auto &b : blocks) {
        shuffle(b, rng);
        pi.insert(pi.end(), b.begin(), b.end());
    }
    return pi;
}

inline drawing random_drawing(const instance &inst, rng_t &rng) {
    drawing d;
    for (int t = 0; t < inst.num_layers(); ++t) d.layers.push_back(random_layer(inst, t, rng));
    return d;
}

// Quadratic pair count of inversions on the common elements.
inline std::int64_t naive_crossings(const permutation &pi, const permutation &rho) {
    std::int64_t n = 0;
    for (std::size_t i = 0; i < pi.size(); ++i)
        for (std::size_t j = i + 1; j < pi.size(); ++j) {
            const auto a = std::find(rho.begin(), rho.end(), pi[i]);
            const auto b = std::find(rho.begin(), rho.end(), pi[j]);
            if (a != rho.end() && b != rho.end() && b < a) ++n;
        }
    return n;
}

inline std::int64_t naive_total(const drawing &d) {
    std::int64_t n = 0;
    for (std::size_t t = 0; t + 1 < d.layers.size(); ++t) n += naive_crossings(d.layers[t], d.layers[t + 1]);
    return n;
}

// Pairs from xs x ys whose relative order differs between pi and rho.
inline std::int64_t naive_restricted(const permutation &pi, const permutation &rho,
                                     const std::vector<char_id> &xs, const std::vector<char_id> &ys) {
    auto pos = [](const permutation &p, char_id c) { return std::find(p.begin(), p.end(), c) - p.begin(); };
    std::int64_t n = 0;
    for (char_id a : xs)
        for (char_id b : ys) {
            if (a == b) continue;
            if ((pos(pi, a) < pos(pi, b)) != (pos(rho, a) < pos(rho, b))) ++n;
        }
    return n;
}

inline permutation project(const permutation &pi, const std::vector<char_id> &keep) {
    permutation out;
    for (char_id c : pi)
        if (std::find(keep.begin(), keep.end(), c) != keep.end()) out.push_back(c);
    return out;
}

// True when every interaction of layer t is a contiguous run of pi.
inline bool interactions_contiguous(const instance &inst, int t, const permutation &pi) {
    for (const auto &inter : inst.interactions()) {
        if (inter.time != t) continue;
        std::vector<std::size_t> at;
        for (char_id c : inter.chars) {
            const auto it = std::find(pi.begin(), pi.end(), c);
            if (it == pi.end()) return false;
            at.push_back(static_cast<std::size_t>(it - pi.begin()));
        }
        const auto [lo, hi] = std::minmax_element(at.begin(), at.end());
        if (*hi - *lo + 1 != at.size()) return false;
    }
    return true;
}

inline bool feasible(const instance &inst, const drawing &d) {
    if (static_cast<int>(d.layers.size()) != inst.num_layers()) return false;
    for (int t = 0; t < inst.num_layers(); ++t) {
        auto sorted = d.layers[t];
        std::sort(sorted.begin(), sorted.end());
        if (sorted != active_at(inst, t)) return false;
        if (!interactions_contiguous(inst, t, d.layers[t])) return false;
    }
    return true;
}

// Every permutation of the active set that keeps interactions contiguous,
// found by plain filtering of all k! orders.
inline std::vector<permutation> enumerate_layer(const instance &inst, int t) {
    auto pi = active_at(inst, t);
    std::vector<permutation> out;
    do
        if (interactions_contiguous(inst, t, pi)) out.push_back(pi);
    while (std::next_permutation(pi.begin(), pi.end()));
    return out;
}

// Exact optimum by a quadratic-per-gap dynamic program over the filtered
// layer permutations. Only for tiny instances.
inline std::int64_t reference_optimum(const instance &inst) {
    std::vector<std::int64_t> prev_cost;
    std::vector<permutation> prev;
    for (int t = 0; t < inst.num_layers(); ++t) {
        auto cur = enumerate_layer(inst, t);
        std::vector<std::int64_t> cost(cur.size(), t == 0 ? 0 : std::numeric_limits<std::int64_t>::max());
        if (t > 0)
            for (std::size_t b = 0; b < cur.size(); ++b)
                for (std::size_t a = 0; a < prev.size(); ++a)
                    cost[b] = std::min(cost[b], prev_cost[a] + naive_crossings(prev[a], cur[b]));
        prev = std::move(cur);
        prev_cost = std::move(cost);
    }
    return *std::min_element(prev_cost.begin(), prev_cost.end());
}

}  // namespace testsupport

#endif  // STORYLINE_TESTS_SUPPORT_HPP
