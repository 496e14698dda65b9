#include <algorithm>
#include <cmath>

#include "storyline/error.hpp"
#include "storyline/solver.hpp"

namespace storyline {

namespace {

// Calls f(a, b, c) for every triple of `layer` in the requested scope.
template <class F>
void for_each_scoped_triple(const ilp_model &m, int layer, lop_scope scope, F &&f) {
    if (scope == lop_scope::kept) {
        m.lop().for_each_triple(layer, f);
        return;
    }
    const auto &a = m.layer_chars(layer);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            for (std::size_t k = j + 1; k < a.size(); ++k) f(a[i], a[j], a[k]);
}

// Out-degree of every character of `layer` in the rounded "above" relation.
std::vector<int> out_degrees(const ilp_model &m, std::span<const double> values, int layer) {
    const auto &chars = m.layer_chars(layer);
    std::vector<int> deg(chars.size(), 0);
    for (std::size_t i = 0; i < chars.size(); ++i)
        for (std::size_t j = i + 1; j < chars.size(); ++j) {
            const double x = values[m.ordering_var(layer, chars[i], chars[j])];
            ++deg[x > 0.5 ? i : j];
        }
    return deg;
}

bool degrees_form_order(std::vector<int> deg) {
    std::sort(deg.begin(), deg.end());
    for (std::size_t i = 0; i < deg.size(); ++i)
        if (deg[i] != static_cast<int>(i)) return false;
    return true;
}

}  // namespace

std::vector<lin_constraint> separate_lop(const ilp_model &m, std::span<const double> values,
                                         bool integral, double tolerance, std::size_t cap,
                                         lop_scope scope) {
    std::vector<lin_constraint> out;
    auto value = [&](int layer, char_id a, char_id b) {
        const double x = values[m.ordering_var(layer, a, b)];
        return integral ? std::round(x) : x;
    };
    for (int t = 0; t < m.inst().num_layers() && out.size() < cap; ++t) {
        for_each_scoped_triple(m, t, scope, [&](char_id a, char_id b, char_id c) {
            if (out.size() >= cap) return;
            const double s = value(t, a, b) + value(t, b, c) - value(t, a, c);
            if (s > 1 + tolerance)
                out.push_back(m.lop_row(t, a, b, c, 0));
            else if (s < -tolerance)
                out.push_back(m.lop_row(t, a, b, c, 1));
        });
    }
    return out;
}

bool is_transitive(const ilp_model &m, std::span<const double> values) {
    for (int t = 0; t < m.inst().num_layers(); ++t)
        if (!degrees_form_order(out_degrees(m, values, t))) return false;
    return true;
}

drawing decode_solution(const ilp_model &m, std::span<const double> values) {
    drawing d;
    const int layers = m.inst().num_layers();
    d.layers.resize(layers);
    for (int t = 0; t < layers; ++t) {
        const auto &chars = m.layer_chars(t);
        const auto deg = out_degrees(m, values, t);
        if (!degrees_form_order(deg))
            throw invalid_drawing("ordering values at layer " + std::to_string(t + 1) +
                                  " are not transitive");
        auto &pi = d.layers[t];
        pi.resize(chars.size());
        const int k = static_cast<int>(chars.size());
        for (int i = 0; i < k; ++i) pi[k - 1 - deg[i]] = chars[i];
    }
    return d;
}

}  // namespace storyline
