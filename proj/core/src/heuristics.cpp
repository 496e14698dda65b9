#include "storyline/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "storyline/consistency.hpp"
#include "storyline/error.hpp"

namespace storyline {

namespace {

std::vector<int> positions(const permutation &pi, int n) {
    std::vector<int> pos(n, -1);
    for (std::size_t i = 0; i < pi.size(); ++i) pos[pi[i]] = static_cast<int>(i);
    return pos;
}

std::int64_t local_crossings(const drawing &d, int first_gap, int last_gap) {
    std::int64_t total = 0;
    for (int g = std::max(0, first_gap); g <= last_gap && g + 1 < static_cast<int>(d.layers.size()); ++g)
        total += gap_crossings(d, g);
    return total;
}

// ---------------------------------------------------------------------------
// Rounding

struct round_node {
    std::vector<char_id> members;  // ascending
    std::vector<int> kids;
    int scope = -1;  // interaction whose local ranks order this node, -1 for layer-wide
};

class layer_rounder {
   public:
    layer_rounder(const ilp_model &m, std::span<const double> values, const rounding_options &opts,
                  int layer, const permutation *prev)
        : m_(m), inst_(m.inst()), values_(values), opts_(opts), t_(layer), prev_(prev) {
        const int n = inst_.num_chars();
        prev_pos_ = prev ? positions(*prev, n) : std::vector<int>(n, -1);
        const auto &chars = m.layer_chars(layer);
        global_.assign(n, 0);
        local_.assign(n, 0);
        for (char_id c : chars) global_[c] = rank(c, chars);
        for (int k : inst_.interactions_at(layer)) {
            const auto &cast = inst_.interaction_at(k).chars;
            for (char_id c : cast) local_[c] = rank(c, cast);
        }
    }

    permutation run() {
        nodes_.push_back({m_.layer_chars(t_), {}, -1});
        for (const auto &set : block_sets()) insert(set.first, set.second);
        if (opts_.sbc_active) collect_forced_pairs();
        permutation out;
        emit(0, out);
        return out;
    }

   private:
    double x(char_id a, char_id b) const { return m_.order_value(values_, t_, a, b); }

    // A + B restricted to the characters of `scope`.
    double rank(char_id c, const std::vector<char_id> &scope) const {
        const double eps = opts_.epsilon;
        int a = 0, b = 0;
        for (char_id o : scope) {
            if (o == c) continue;
            const double above = x(o, c);
            if (above > 0.5 + eps) ++a;
            if (std::abs(above - 0.5) <= eps && prev_pos_[c] >= 0 && prev_pos_[o] >= 0 &&
                prev_pos_[o] < prev_pos_[c])
                ++b;
        }
        return a + b;
    }

    // Interactions of the layer, plus SBC-2 casts when constraints are active.
    std::vector<std::pair<std::vector<char_id>, int>> block_sets() const {
        std::vector<std::pair<std::vector<char_id>, int>> sets;
        for (int k : inst_.interactions_at(t_)) sets.push_back({inst_.interaction_at(k).chars, k});
        if (opts_.sbc_active)
            for (const auto &p : qualifying_pairs(inst_)) {
                const auto &a = inst_.interaction_at(p.first);
                if (a.time < t_ && t_ < inst_.interaction_at(p.second).time && a.chars.size() > 1)
                    sets.push_back({a.chars, -1});
            }
        std::stable_sort(sets.begin(), sets.end(), [](const auto &x, const auto &y) {
            return x.first.size() > y.first.size();
        });
        return sets;
    }

    static bool subset(const std::vector<char_id> &a, const std::vector<char_id> &b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }

    static bool intersects(const std::vector<char_id> &a, const std::vector<char_id> &b) {
        for (char_id c : a)
            if (std::binary_search(b.begin(), b.end(), c)) return true;
        return false;
    }

    void insert(const std::vector<char_id> &set, int interaction) {
        int at = 0;
        for (bool descended = true; descended;) {
            descended = false;
            for (int kid : nodes_[at].kids)
                if (subset(set, nodes_[kid].members)) {
                    at = kid;
                    descended = true;
                    break;
                }
        }
        if (nodes_[at].members == set && at != 0) return;
        for (int kid : nodes_[at].kids)
            if (intersects(set, nodes_[kid].members)) return;  // not nested; dropped
        const int scope = interaction >= 0 ? interaction : nodes_[at].scope;
        nodes_.push_back({set, {}, scope});
        nodes_[at].kids.push_back(static_cast<int>(nodes_.size()) - 1);
    }

    // SBC-1: casts inside their anchor window keep the previous layer's order.
    void collect_forced_pairs() {
        if (!prev_) return;
        for (int k = 0; k < inst_.num_interactions(); ++k) {
            const auto &inter = inst_.interaction_at(k);
            if (inter.chars.size() < 2 || t_ > inter.time || t_ <= anchor_layer(inst_, k)) continue;
            const auto order = restrict_to(*prev_, inter.chars);
            for (std::size_t i = 0; i + 1 < order.size(); ++i) forced_.push_back({order[i], order[i + 1]});
        }
    }

    struct item {
        char_id single = -1;
        int node = -1;
        std::vector<char_id> chars;
        double key = 0;
        int prev = std::numeric_limits<int>::max();
        char_id smallest = 0;
    };

    void emit(int at, permutation &out) {
        const auto &node = nodes_[at];
        std::vector<item> items;
        std::vector<char> covered(inst_.num_chars(), 0);
        for (int kid : node.kids) {
            item it;
            it.node = kid;
            it.chars = nodes_[kid].members;
            items.push_back(std::move(it));
            for (char_id c : nodes_[kid].members) covered[c] = 1;
        }
        for (char_id c : node.members)
            if (!covered[c]) {
                item it;
                it.single = c;
                it.chars = {c};
                items.push_back(std::move(it));
            }
        const auto &d = node.scope >= 0 ? local_ : global_;
        std::vector<int> owner(inst_.num_chars(), -1);
        for (std::size_t i = 0; i < items.size(); ++i) {
            auto &it = items[i];
            double sum = 0;
            for (char_id c : it.chars) {
                sum += d[c];
                owner[c] = static_cast<int>(i);
                if (prev_pos_[c] >= 0) it.prev = std::min(it.prev, prev_pos_[c]);
            }
            it.key = sum / static_cast<double>(it.chars.size());
            it.smallest = it.chars.front();
        }

        const std::size_t k = items.size();
        std::vector<std::vector<int>> succ(k);
        std::vector<int> indeg(k, 0);
        for (const auto &[u, v] : forced_) {
            const int a = owner[u], b = owner[v];
            if (a < 0 || b < 0 || a == b) continue;
            succ[a].push_back(b);
            ++indeg[b];
        }
        auto later = [&](int a, int b) {
            const auto &x = items[a];
            const auto &y = items[b];
            return std::tie(x.key, x.prev, x.smallest) > std::tie(y.key, y.prev, y.smallest);
        };
        std::priority_queue<int, std::vector<int>, decltype(later)> ready(later);
        for (std::size_t i = 0; i < k; ++i)
            if (indeg[i] == 0) ready.push(static_cast<int>(i));
        std::vector<char> done(k, 0);
        for (std::size_t emitted = 0; emitted < k; ++emitted) {
            int pick = -1;
            while (!ready.empty() && done[ready.top()]) ready.pop();
            if (!ready.empty()) {
                pick = ready.top();
                ready.pop();
            } else {
                // Cyclic requirements: take the best remaining item.
                for (std::size_t i = 0; i < k; ++i)
                    if (!done[i] && (pick < 0 || later(pick, static_cast<int>(i))))
                        pick = static_cast<int>(i);
            }
            done[pick] = 1;
            for (int s : succ[pick])
                if (--indeg[s] == 0 && !done[s]) ready.push(s);
            if (items[pick].node >= 0)
                emit(items[pick].node, out);
            else
                out.push_back(items[pick].single);
        }
    }

    const ilp_model &m_;
    const instance &inst_;
    std::span<const double> values_;
    const rounding_options &opts_;
    int t_;
    const permutation *prev_;
    std::vector<int> prev_pos_;
    std::vector<double> global_, local_;
    std::vector<round_node> nodes_;
    std::vector<std::pair<char_id, char_id>> forced_;
};

// ---------------------------------------------------------------------------
// Bary-SL helpers

// Orders `group` by repeatedly taking the vertex with fewest incoming arcs
// among those left; ties keep the order of `group`.
permutation min_indegree_order(const std::vector<char_id> &group,
                               const std::vector<std::vector<char>> &arc,
                               const std::vector<int> &index) {
    permutation out;
    std::vector<char> taken(group.size(), 0);
    for (std::size_t step = 0; step < group.size(); ++step) {
        int best = -1, best_in = 0;
        for (std::size_t i = 0; i < group.size(); ++i) {
            if (taken[i]) continue;
            int in = 0;
            for (std::size_t j = 0; j < group.size(); ++j)
                if (!taken[j] && arc[index[group[j]]][index[group[i]]]) ++in;
            if (best < 0 || in < best_in) {
                best = static_cast<int>(i);
                best_in = in;
            }
        }
        taken[best] = 1;
        out.push_back(group[best]);
    }
    return out;
}

permutation bary_layer(const instance &inst, const drawing &d, int i) {
    const int n = inst.num_chars();
    const int layers = inst.num_layers();
    const auto &cast = inst.interaction_at(inst.interactions_at(i).front()).chars;
    std::vector<std::vector<int>> nbr_pos;
    nbr_pos.push_back(positions(d.layers[i - 1], n));
    if (i + 1 < layers) nbr_pos.push_back(positions(d.layers[i + 1], n));

    const auto &pi = d.layers[i];
    std::vector<int> index(n, -1);
    std::vector<char_id> in_s;
    for (char_id c : pi) {
        bool seen = false;
        for (const auto &p : nbr_pos) seen = seen || p[c] >= 0;
        if (seen) {
            index[c] = static_cast<int>(in_s.size());
            in_s.push_back(c);
        }
    }

    // arc[a][b]: a above b on every neighbour layer holding both.
    std::vector<std::vector<char>> arc(in_s.size(), std::vector<char>(in_s.size(), 0));
    for (std::size_t a = 0; a < in_s.size(); ++a)
        for (std::size_t b = 0; b < in_s.size(); ++b) {
            if (a == b) continue;
            int shared = 0;
            bool agree = true;
            for (const auto &p : nbr_pos) {
                if (p[in_s[a]] < 0 || p[in_s[b]] < 0) continue;
                ++shared;
                agree = agree && p[in_s[a]] < p[in_s[b]];
            }
            arc[a][b] = shared > 0 && agree;
        }

    std::vector<char_id> inside_all, outside_all, inside_s, outside_s;
    for (char_id c : pi) {
        const bool member = std::binary_search(cast.begin(), cast.end(), c);
        (member ? inside_all : outside_all).push_back(c);
        if (index[c] >= 0) (member ? inside_s : outside_s).push_back(c);
    }
    // Characters outside S keep their slot within their group.
    const auto pi_i = assign(inside_all, min_indegree_order(inside_s, arc, index));
    const auto pi_c = assign(outside_all, min_indegree_order(outside_s, arc, index));

    auto prefers_above = [&](char_id c) {
        int above = 0, below = 0;
        for (const auto &p : nbr_pos) {
            if (p[c] < 0) continue;
            for (char_id m : cast) {
                if (p[m] < 0) continue;
                if (p[c] < p[m]) ++below;  // would cross if placed below
                else ++above;
            }
        }
        return above <= below;
    };
    std::size_t prefix = 0;
    while (prefix < pi_c.size() && prefers_above(pi_c[prefix])) ++prefix;

    permutation out(pi_c.begin(), pi_c.begin() + static_cast<std::ptrdiff_t>(prefix));
    out.insert(out.end(), pi_i.begin(), pi_i.end());
    out.insert(out.end(), pi_c.begin() + static_cast<std::ptrdiff_t>(prefix), pi_c.end());
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

drawing round_fractional(const ilp_model &m, std::span<const double> values,
                         const rounding_options &opts) {
    if (values.size() < static_cast<std::size_t>(m.num_vars()))
        throw std::invalid_argument("round_fractional: values do not cover the model columns");
    const int layers = m.inst().num_layers();
    drawing d;
    d.layers.resize(layers);
    for (int t = 0; t < layers; ++t) {
        if (t < static_cast<int>(opts.locked_prefix.size())) {
            d.layers[t] = opts.locked_prefix[t];
            continue;
        }
        layer_rounder r(m, values, opts, t, t > 0 ? &d.layers[t - 1] : nullptr);
        d.layers[t] = r.run();
    }
    return d;
}

drawing remove_double_crossings(const instance &inst, const drawing &input, int passes) {
    require_valid(inst, input);
    drawing d = input;
    const int n = inst.num_chars();
    const int layers = inst.num_layers();
    std::vector<std::vector<int>> pos(layers);
    for (int t = 0; t < layers; ++t) pos[t] = positions(d.layers[t], n);

    auto crosses = [&](char_id a, char_id b, int g) {
        if (pos[g][a] < 0 || pos[g][b] < 0 || pos[g + 1][a] < 0 || pos[g + 1][b] < 0) return false;
        return (pos[g][a] < pos[g][b]) != (pos[g + 1][a] < pos[g + 1][b]);
    };
    auto swap_at = [&](char_id a, char_id b, int t) {
        std::swap(d.layers[t][pos[t][a]], d.layers[t][pos[t][b]]);
        std::swap(pos[t][a], pos[t][b]);
    };

    for (int pass = 0; pass < passes; ++pass) {
        bool changed = false;
        for (char_id a = 0; a < n; ++a)
            for (char_id b = a + 1; b < n; ++b) {
                int first = -1;
                for (int g = 0; g + 1 < layers; ++g) {
                    if (!crosses(a, b, g)) continue;
                    if (first < 0) {
                        first = g;
                        continue;
                    }
                    // Crossings at gaps first and g: swap on layers first+1..g.
                    bool together = true;
                    for (int k = first + 1; together && k <= g; ++k)
                        together = inst.interaction_of(a, k) == inst.interaction_of(b, k);
                    if (together) {
                        const auto before = local_crossings(d, first, g);
                        for (int k = first + 1; k <= g; ++k) swap_at(a, b, k);
                        if (local_crossings(d, first, g) < before) {
                            changed = true;
                            first = -1;
                            continue;
                        }
                        for (int k = first + 1; k <= g; ++k) swap_at(a, b, k);
                    }
                    first = g;
                }
            }
        if (!changed) break;
    }
    return d;
}

drawing push_crossings(const instance &inst, const drawing &input) {
    require_valid(inst, input);
    drawing d = input;
    const int n = inst.num_chars();
    for (int i = 1; i < inst.num_layers(); ++i) {
        const auto prev = positions(d.layers[i - 1], n);
        auto &pi = d.layers[i];
        std::size_t j = 0;
        while (j < pi.size()) {
            if (prev[pi[j]] < 0) {
                ++j;
                continue;
            }
            const int group = inst.interaction_of(pi[j], i);
            std::size_t end = j + 1;
            while (end < pi.size() && prev[pi[end]] >= 0 && inst.interaction_of(pi[end], i) == group)
                ++end;
            std::sort(pi.begin() + static_cast<std::ptrdiff_t>(j),
                      pi.begin() + static_cast<std::ptrdiff_t>(end),
                      [&](char_id a, char_id b) { return prev[a] < prev[b]; });
            j = end;
        }
    }
    return d;
}

drawing barycenter_sl(const instance &inst, const drawing &input, int passes) {
    require_valid(inst, input);
    drawing d = input;
    for (int pass = 0; pass < passes; ++pass)
        for (int i = 1; i < inst.num_layers(); ++i) {
            if (inst.interactions_at(i).size() != 1) continue;
            auto candidate = bary_layer(inst, d, i);
            if (candidate == d.layers[i]) continue;
            const auto before = local_crossings(d, i - 1, i);
            std::swap(d.layers[i], candidate);
            if (local_crossings(d, i - 1, i) >= before) std::swap(d.layers[i], candidate);
        }
    return d;
}

drawing improve(const instance &inst, const drawing &input, int passes) {
    drawing d = input;
    for (int pass = 0; pass < passes; ++pass) {
        d = barycenter_sl(inst, d, 1);
        d = push_crossings(inst, d);
    }
    return remove_double_crossings(inst, d, passes);
}

drawing greedy_baseline(const instance &inst) {
    const int n = inst.num_chars();
    drawing d;
    d.layers.resize(inst.num_layers());
    for (int t = 0; t < inst.num_layers(); ++t) {
        const std::vector<int> prev =
            t > 0 ? positions(d.layers[t - 1], n) : std::vector<int>(n, -1);
        struct unit {
            std::vector<char_id> chars;
            bool old = false;
            double key = 0;
            int rank = 0;  // tie-break: interaction order, then free characters by id
        };
        std::vector<unit> units;
        for (int k : inst.interactions_at(t)) {
            unit u;
            std::vector<char_id> older, newer;
            for (char_id c : inst.interaction_at(k).chars) (prev[c] >= 0 ? older : newer).push_back(c);
            std::sort(older.begin(), older.end(), [&](char_id a, char_id b) { return prev[a] < prev[b]; });
            double sum = 0;
            for (char_id c : older) sum += prev[c];
            u.old = !older.empty();
            u.key = u.old ? sum / static_cast<double>(older.size()) : 0;
            u.chars = older;
            u.chars.insert(u.chars.end(), newer.begin(), newer.end());
            u.rank = static_cast<int>(units.size());
            units.push_back(std::move(u));
        }
        for (char_id c : inst.active_chars(t))
            if (inst.interaction_of(c, t) < 0) {
                unit u;
                u.chars = {c};
                u.old = prev[c] >= 0;
                u.key = u.old ? prev[c] : 0;
                u.rank = static_cast<int>(units.size());
                units.push_back(std::move(u));
            }
        std::stable_sort(units.begin(), units.end(), [](const unit &a, const unit &b) {
            if (a.old != b.old) return a.old;
            if (a.old && a.key != b.key) return a.key < b.key;
            return a.rank < b.rank;
        });
        for (const auto &u : units) d.layers[t].insert(d.layers[t].end(), u.chars.begin(), u.chars.end());
    }
    return d;
}

// ---------------------------------------------------------------------------
// Slicing

namespace {

struct window_instance {
    instance sub;
    std::vector<char_id> to_global;  // local id -> global id
    std::vector<char_id> to_local;   // global id -> local id or -1
};

window_instance make_window(const instance &inst, int first, int last) {
    std::vector<char_id> to_global, to_local(inst.num_chars(), -1);
    std::vector<character> chars;
    std::vector<activity_interval> act;
    for (char_id c = 0; c < inst.num_chars(); ++c) {
        const auto &a = inst.activity(c);
        if (a.end < first || a.start > last) continue;
        to_local[c] = static_cast<char_id>(to_global.size());
        to_global.push_back(c);
        chars.push_back(inst.character_info(c));
        act.push_back({std::max(a.start, first) - first, std::min(a.end, last) - first});
    }
    std::vector<interaction> inters;
    for (const auto &inter : inst.interactions()) {
        if (inter.time < first || inter.time > last) continue;
        interaction local{inter.time - first, {}};
        for (char_id c : inter.chars) local.chars.push_back(to_local[c]);
        inters.push_back(std::move(local));
    }
    return {instance::build(last - first + 1, std::move(chars), std::move(inters), std::move(act)),
            std::move(to_global), std::move(to_local)};
}

}  // namespace

slicing_result initial_slicing(const instance &inst, const slice_config &cfg,
                               const solve_options &opts) {
    if (cfg.stride < 1 || cfg.stride >= cfg.window)
        throw std::invalid_argument("slicing needs 1 <= stride < window");
    slicing_result res;
    const int layers = inst.num_layers();
    res.d.layers.resize(layers);

    solve_options sub_opts = opts;
    sub_opts.form = formulation::plo;
    sub_opts.init = false;
    sub_opts.pinned.clear();
    if (sub_opts.seeds.size() > 1) sub_opts.seeds.resize(1);

    auto fail = [&](const std::string &why) {
        res.fallback = true;
        res.message = why;
        res.d = greedy_baseline(inst);
        return res;
    };

    int accepted = -1;  // last layer already in the result
    while (accepted + 1 < layers) {
        const int first = std::max(0, accepted);
        const int last = std::min(layers - 1, first + cfg.window - 1);
        auto w = make_window(inst, first, last);
        solve_options o = sub_opts;
        if (accepted >= 0) {
            permutation pin;
            for (char_id c : res.d.layers[accepted]) pin.push_back(w.to_local[c]);
            o.pinned = {{0, pin}};
        }
        solve_result sr;
        try {
            sr = solve_exact(w.sub, o);
        } catch (const std::exception &e) {
            return fail(e.what());
        }
        ++res.windows;
        if (sr.report.best_crossings < 0)
            return fail("window " + std::to_string(first + 1) + ".." + std::to_string(last + 1) +
                        " has no solution (" + std::string(to_string(sr.report.status)) + ")");
        const int keep_to = last == layers - 1 ? last : std::min(last, accepted + cfg.stride);
        for (int t = accepted + 1; t <= keep_to; ++t) {
            permutation global;
            for (char_id c : sr.d.layers[t - first]) global.push_back(w.to_global[c]);
            res.d.layers[t] = std::move(global);
        }
        accepted = keep_to;
    }
    return res;
}

}  // namespace storyline
