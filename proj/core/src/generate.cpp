#include "storyline/generate.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace storyline {

namespace {

// Uniform in [lo, hi] straight from the engine, so output does not depend
// on the standard library's distribution implementations.
int pick(std::mt19937_64 &rng, int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(rng() % span);
}

double unit(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void shuffle(std::vector<char_id> &v, std::mt19937_64 &rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[static_cast<std::size_t>(rng() % i)]);
}

}  // namespace

instance generate_instance(const generator_params &p, std::uint64_t seed) {
    if (p.chars < 1 || p.layers < 1) throw std::invalid_argument("need at least one character and layer");
    if (p.min_size < 1 || p.min_size > p.max_size)
        throw std::invalid_argument("interaction sizes need 1 <= min_size <= max_size");
    if (p.min_interactions < 0 || p.min_interactions > p.max_interactions)
        throw std::invalid_argument("need 0 <= min_interactions <= max_interactions");
    if (p.min_size > p.chars)
        throw std::invalid_argument("interaction size " + std::to_string(p.min_size) + " exceeds " +
                                    std::to_string(p.chars) + " characters");
    if (static_cast<long long>(p.min_interactions) * p.min_size > p.chars)
        throw std::invalid_argument("min_interactions * min_size exceeds the number of characters");
    if (p.repeat < 0 || p.repeat > 1) throw std::invalid_argument("repeat must lie in [0, 1]");

    std::mt19937_64 rng(seed);
    std::vector<interaction> inters;
    std::vector<std::vector<std::vector<char_id>>> per_layer(p.layers);
    for (int t = 0; t < p.layers; ++t) {
        if (t > 0 && p.repeat > 0 && unit(rng) < p.repeat && !per_layer[t - 1].empty()) {
            per_layer[t] = per_layer[t - 1];
            continue;
        }
        std::vector<char_id> pool(p.chars);
        for (char_id c = 0; c < p.chars; ++c) pool[c] = c;
        shuffle(pool, rng);
        const int count = pick(rng, p.min_interactions, p.max_interactions);
        std::size_t used = 0;
        for (int k = 0; k < count; ++k) {
            const int left = p.chars - static_cast<int>(used);
            if (left < p.min_size) break;
            const int size = pick(rng, p.min_size, std::min(p.max_size, left));
            std::vector<char_id> cast(pool.begin() + static_cast<std::ptrdiff_t>(used),
                                      pool.begin() + static_cast<std::ptrdiff_t>(used + size));
            std::sort(cast.begin(), cast.end());
            per_layer[t].push_back(std::move(cast));
            used += static_cast<std::size_t>(size);
        }
    }
    // Characters that never interact join a random layer on their own.
    std::vector<char> seen(p.chars, 0);
    for (const auto &layer : per_layer)
        for (const auto &cast : layer)
            for (char_id c : cast) seen[c] = 1;
    for (char_id c = 0; c < p.chars; ++c)
        if (!seen[c]) per_layer[pick(rng, 0, p.layers - 1)].push_back({c});
    // A layer must hold an active character; the activity ranges may not reach it.
    for (int t = 0; t < p.layers; ++t) {
        if (!per_layer[t].empty()) continue;
        bool covered = false;
        for (int a = 0; a < t && !covered; ++a)
            for (int b = t + 1; b < p.layers && !covered; ++b)
                for (const auto &ca : per_layer[a])
                    for (const auto &cb : per_layer[b])
                        for (char_id c : ca)
                            if (std::find(cb.begin(), cb.end(), c) != cb.end()) covered = true;
        if (!covered) per_layer[t].push_back({static_cast<char_id>(pick(rng, 0, p.chars - 1))});
    }
    for (int t = 0; t < p.layers; ++t)
        for (auto &cast : per_layer[t]) inters.push_back({t, std::move(cast)});

    std::vector<character> chars(p.chars);
    for (char_id c = 0; c < p.chars; ++c) chars[c] = {c + 1, "c" + std::to_string(c + 1)};
    return instance::build(p.layers, std::move(chars), std::move(inters));
}

}  // namespace storyline
