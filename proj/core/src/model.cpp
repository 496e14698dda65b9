#include "storyline/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "storyline/consistency.hpp"

namespace storyline {

namespace {

std::int64_t choose2(std::int64_t k) { return k * (k - 1) / 2; }
std::int64_t choose3(std::int64_t k) { return k * (k - 1) * (k - 2) / 6; }

// Index of pair (i, j), i < j, among the pairs of k items.
int pair_index(int i, int j, int k) { return i * k - i * (i + 1) / 2 + (j - i - 1); }

std::vector<int> local_index(const std::vector<char_id> &chars, int n) {
    std::vector<int> local(n, -1);
    for (std::size_t i = 0; i < chars.size(); ++i) local[chars[i]] = static_cast<int>(i);
    return local;
}

}  // namespace

std::string_view to_string(formulation f) {
    switch (f) {
        case formulation::lin: return "LIN";
        case formulation::qdr: return "QDR";
        case formulation::plo: return "PLO";
    }
    return "?";
}

formulation parse_formulation(std::string_view s) {
    std::string lower(s);
    for (auto &ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (lower == "lin") return formulation::lin;
    if (lower == "qdr") return formulation::qdr;
    if (lower == "plo") return formulation::plo;
    throw std::invalid_argument("unknown formulation '" + std::string(s) + "'");
}

std::string_view to_string(row_tag tag) {
    switch (tag) {
        case row_tag::tree: return "tree";
        case row_tag::cr: return "cr";
        case row_tag::lop: return "lop";
        case row_tag::prop_r1: return "prop_r1";
        case row_tag::prop_r2: return "prop_r2";
        case row_tag::prop_i: return "prop_i";
        case row_tag::sbc1: return "sbc1";
        case row_tag::sbc2: return "sbc2";
        case row_tag::fix: return "fix";
    }
    return "?";
}

// ---------------------------------------------------------------------------

double lin_constraint::activity(std::span<const double> values) const {
    double lhs = 0;
    for (const auto &t : terms) lhs += t.coef * values[t.var];
    return lhs;
}

double lin_constraint::violation(std::span<const double> values) const {
    const double lhs = activity(values);
    switch (cmp) {
        case sense::le: return std::max(0.0, lhs - rhs);
        case sense::ge: return std::max(0.0, rhs - lhs);
        case sense::eq: return std::abs(lhs - rhs);
    }
    return 0;
}

linear_expr &linear_expr::add(double coef, literal lit) {
    if (lit.negated) {
        constant_ += coef;
        terms_.push_back({-coef, lit.var});
    } else {
        terms_.push_back({coef, lit.var});
    }
    return *this;
}

linear_expr &linear_expr::add(double coef, int var) {
    terms_.push_back({coef, var});
    return *this;
}

lin_constraint linear_expr::make(sense s, double rhs, row_tag tag, bool lazy) const {
    std::map<int, double> merged;
    for (const auto &t : terms_) merged[t.var] += t.coef;
    lin_constraint row;
    for (const auto &[var, coef] : merged)
        if (coef != 0) row.terms.push_back({coef, var});
    row.cmp = s;
    row.rhs = rhs - constant_;
    row.tag = tag;
    row.lazy = lazy;
    return row;
}

// ---------------------------------------------------------------------------

lop_family::lop_family(const std::vector<std::vector<char_id>> &active)
    : active_(active), rules_(active.size()) {}

std::int64_t lop_family::triple_count(int layer) const {
    const auto &r = rules_.at(layer);
    if (!r.reduced) return choose3(static_cast<std::int64_t>(active_[layer].size()));
    std::int64_t count = choose2(static_cast<std::int64_t>(r.outside.size()));
    if (!r.inside_propagated) count += choose3(static_cast<std::int64_t>(r.inside.size()));
    return count;
}

std::int64_t lop_family::row_count() const {
    std::int64_t total = 0;
    for (int t = 0; t < num_layers(); ++t) total += row_count(t);
    return total;
}

// ---------------------------------------------------------------------------

ilp_model::ilp_model(const instance &inst, formulation form) : inst_(inst), form_(form) {
    const int layers = inst.num_layers();
    const int n = inst.num_chars();
    layer_chars_.resize(layers);
    local_.resize(layers);
    x_offset_.resize(layers);
    for (int t = 0; t < layers; ++t) {
        layer_chars_[t] = inst.active_chars(t);
        local_[t] = local_index(layer_chars_[t], n);
        x_offset_[t] = num_vars();
        const auto &chars = layer_chars_[t];
        for (std::size_t i = 0; i < chars.size(); ++i)
            for (std::size_t j = i + 1; j < chars.size(); ++j)
                vars_.push_back({var_kind::ordering, t, chars[i], chars[j]});
    }
    objective_.assign(vars_.size(), 0.0);
    lop_ = lop_family(layer_chars_);
}

int ilp_model::add_crossing_vars() {
    const int layers = inst_.num_layers();
    const int n = inst_.num_chars();
    const int first = num_vars();
    gap_chars_.assign(std::max(0, layers - 1), {});
    gap_local_.assign(gap_chars_.size(), {});
    y_offset_.assign(gap_chars_.size(), 0);
    for (int g = 0; g + 1 < layers; ++g) {
        gap_chars_[g] = inst_.active_interval(g, g + 1);
        gap_local_[g] = local_index(gap_chars_[g], n);
        y_offset_[g] = num_vars();
        const auto &chars = gap_chars_[g];
        for (std::size_t i = 0; i < chars.size(); ++i)
            for (std::size_t j = i + 1; j < chars.size(); ++j)
                vars_.push_back({var_kind::crossing, g, chars[i], chars[j]});
    }
    objective_.resize(vars_.size(), 0.0);
    return first;
}

int ilp_model::ordering_var(int layer, char_id u, char_id v) const {
    if (u >= v) throw std::invalid_argument("ordering_var expects u < v");
    const auto &local = local_.at(layer);
    const int lu = local.at(u), lv = local.at(v);
    if (lu < 0 || lv < 0) return -1;
    return x_offset_[layer] + pair_index(lu, lv, static_cast<int>(layer_chars_[layer].size()));
}

int ilp_model::crossing_var(int gap, char_id u, char_id v) const {
    if (u >= v) throw std::invalid_argument("crossing_var expects u < v");
    if (gap < 0 || gap >= static_cast<int>(gap_local_.size())) return -1;
    const auto &local = gap_local_[gap];
    const int lu = local.at(u), lv = local.at(v);
    if (lu < 0 || lv < 0) return -1;
    return y_offset_[gap] + pair_index(lu, lv, static_cast<int>(gap_chars_[gap].size()));
}

literal ilp_model::order(int layer, char_id a, char_id b) const {
    if (a == b) throw std::invalid_argument("order of a character with itself");
    const int var = a < b ? ordering_var(layer, a, b) : ordering_var(layer, b, a);
    if (var < 0) throw std::out_of_range("order: character inactive at layer");
    return {var, a > b};
}

double ilp_model::order_value(std::span<const double> values, int layer, char_id a,
                              char_id b) const {
    const auto lit = order(layer, a, b);
    return lit.negated ? 1.0 - values[lit.var] : values[lit.var];
}

lin_constraint ilp_model::lop_row(int layer, char_id a, char_id b, char_id c, int which) const {
    linear_expr e;
    e.add(1, order(layer, a, b)).add(1, order(layer, b, c)).add(-1, order(layer, a, c));
    return which == 0 ? e.make(sense::le, 1, row_tag::lop, true)
                      : e.make(sense::ge, 0, row_tag::lop, true);
}

double ilp_model::evaluate(std::span<const double> values) const {
    double z = offset_;
    for (int j = 0; j < num_vars(); ++j) z += objective_[j] * values[j];
    for (const auto &q : quadratic_) z += q.coef * values[q.a] * values[q.b];
    return z;
}

std::vector<double> ilp_model::encode(const drawing &d) const {
    require_valid(inst_, d);
    const int n = inst_.num_chars();
    std::vector<std::vector<int>> pos(d.layers.size(), std::vector<int>(n, -1));
    for (std::size_t t = 0; t < d.layers.size(); ++t)
        for (std::size_t i = 0; i < d.layers[t].size(); ++i) pos[t][d.layers[t][i]] = static_cast<int>(i);
    std::vector<double> values(vars_.size(), 0.0);
    for (std::size_t j = 0; j < vars_.size(); ++j) {
        const auto &v = vars_[j];
        if (v.kind == var_kind::ordering) {
            values[j] = pos[v.layer][v.u] < pos[v.layer][v.v] ? 1.0 : 0.0;
        } else {
            const bool before = pos[v.layer][v.u] < pos[v.layer][v.v];
            const bool after = pos[v.layer + 1][v.u] < pos[v.layer + 1][v.v];
            values[j] = before != after ? 1.0 : 0.0;
        }
    }
    return values;
}

model_stats ilp_model::stats() const {
    model_stats s;
    for (const auto &v : vars_) (v.kind == var_kind::ordering ? s.ordering_vars : s.crossing_vars)++;
    for (const auto &r : rows_) s.rows[static_cast<std::size_t>(r.tag)]++;
    s.lop_rows = lop_.row_count();
    s.quadratic_terms = static_cast<int>(quadratic_.size());
    return s;
}

// ---------------------------------------------------------------------------

namespace {

void add_tree_rows(ilp_model &m) {
    const auto &inst = m.inst();
    for (const auto &inter : inst.interactions()) {
        const int t = inter.time;
        const auto &chars = inter.chars;
        for (char_id w : m.layer_chars(t)) {
            if (std::binary_search(chars.begin(), chars.end(), w)) continue;
            for (std::size_t i = 0; i < chars.size(); ++i)
                for (std::size_t j = i + 1; j < chars.size(); ++j) {
                    linear_expr e;
                    e.add(1, m.order(t, chars[i], w)).add(-1, m.order(t, chars[j], w));
                    m.add_row(e.make(sense::eq, 0, row_tag::tree));
                }
        }
    }
}

ilp_model base_model(const instance &inst, formulation form) {
    ilp_model m(inst, form);
    add_tree_rows(m);
    return m;
}

void add_crossing_part(ilp_model &m) {
    m.add_crossing_vars();
    for (int j = 0; j < m.num_vars(); ++j) {
        const auto v = m.vars()[j];
        if (v.kind != var_kind::crossing) continue;
        const int xi = m.ordering_var(v.layer, v.u, v.v);
        const int xn = m.ordering_var(v.layer + 1, v.u, v.v);
        m.add_objective(j, 1.0);
        linear_expr down, up;
        down.add(1, j).add(-1, xi).add(1, xn);  // y >= x_i - x_i+1
        up.add(1, j).add(1, xi).add(-1, xn);    // y >= x_i+1 - x_i
        m.add_row(down.make(sense::ge, 0, row_tag::cr));
        m.add_row(up.make(sense::ge, 0, row_tag::cr));
    }
}

}  // namespace

ilp_model build_lin(const instance &inst) {
    auto m = base_model(inst, formulation::lin);
    add_crossing_part(m);
    return m;
}

ilp_model build_qdr(const instance &inst) {
    auto m = base_model(inst, formulation::qdr);
    for (int g = 0; g + 1 < inst.num_layers(); ++g) {
        const auto common = inst.active_interval(g, g + 1);
        for (std::size_t i = 0; i < common.size(); ++i)
            for (std::size_t j = i + 1; j < common.size(); ++j) {
                const int a = m.ordering_var(g, common[i], common[j]);
                const int b = m.ordering_var(g + 1, common[i], common[j]);
                // x_a (1 - x_b) + (1 - x_a) x_b
                m.add_objective(a, 1.0);
                m.add_objective(b, 1.0);
                m.add_quadratic(-2.0, a, b);
            }
    }
    return m;
}

char_id representative_char(const interaction &inter) {
    return *std::min_element(inter.chars.begin(), inter.chars.end());
}

bool plo_eligible(const instance &inst, int layer) {
    if (layer < 1 || layer >= inst.num_layers()) return false;
    const auto here = inst.interactions_at(layer);
    if (here.size() != 1) return false;
    for (char_id c : inst.active_chars(layer))
        if (!inst.is_active(c, layer - 1) && inst.interaction_of(c, layer) < 0) return false;
    return true;
}

ilp_model build_plo(const instance &inst) {
    auto m = base_model(inst, formulation::plo);
    add_crossing_part(m);
    for (int t = 1; t < inst.num_layers(); ++t) {
        if (!plo_eligible(inst, t)) continue;
        const auto &inter = inst.interaction_at(inst.interactions_at(t).front());
        lop_family::layer_rule rule;
        rule.reduced = true;
        rule.representative = representative_char(inter);
        rule.inside = inter.chars;
        for (char_id c : m.layer_chars(t))
            if (!std::binary_search(inter.chars.begin(), inter.chars.end(), c))
                rule.outside.push_back(c);
        rule.inside_propagated = std::all_of(inter.chars.begin(), inter.chars.end(),
                                             [&](char_id c) { return inst.is_active(c, t - 1); });

        const char_id w = rule.representative;
        const auto &out = rule.outside;
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                for (int flip = 0; flip < 2; ++flip) {
                    const char_id u = flip ? out[j] : out[i];
                    const char_id v = flip ? out[i] : out[j];
                    // both below w: x_uv >= x_prev,uv + x_uw + x_vw - 2
                    linear_expr r1;
                    r1.add(1, m.order(t, u, v)).add(-1, m.order(t - 1, u, v));
                    r1.add(-1, m.order(t, u, w)).add(-1, m.order(t, v, w));
                    m.add_row(r1.make(sense::ge, -2, row_tag::prop_r1));
                    // both above w: x_uv >= x_prev,uv + x_wu + x_wv - 2
                    linear_expr r2;
                    r2.add(1, m.order(t, u, v)).add(-1, m.order(t - 1, u, v));
                    r2.add(-1, m.order(t, w, u)).add(-1, m.order(t, w, v));
                    m.add_row(r2.make(sense::ge, -2, row_tag::prop_r2));
                }
        if (rule.inside_propagated) {
            const auto &in = rule.inside;
            for (std::size_t i = 0; i < in.size(); ++i)
                for (std::size_t j = i + 1; j < in.size(); ++j) {
                    linear_expr e;
                    e.add(1, m.order(t, in[i], in[j])).add(-1, m.order(t - 1, in[i], in[j]));
                    m.add_row(e.make(sense::eq, 0, row_tag::prop_i));
                }
        }
        m.set_lop_rule(t, std::move(rule));
    }
    return m;
}

ilp_model add_sbc(const instance &inst, ilp_model m) {
    if (!(m.inst() == inst)) throw std::invalid_argument("add_sbc: model built from another instance");
    if (m.has_sbc()) return m;
    for (int k = 0; k < inst.num_interactions(); ++k) {
        const auto &inter = inst.interaction_at(k);
        const auto &chars = inter.chars;
        for (int t = anchor_layer(inst, k); t < inter.time; ++t)
            for (std::size_t i = 0; i < chars.size(); ++i)
                for (std::size_t j = i + 1; j < chars.size(); ++j) {
                    linear_expr e;
                    e.add(1, m.order(t, chars[i], chars[j]))
                        .add(-1, m.order(inter.time, chars[i], chars[j]));
                    m.add_row(e.make(sense::eq, 0, row_tag::sbc1));
                }
    }
    for (const auto &p : qualifying_pairs(inst)) {
        const auto &a = inst.interaction_at(p.first);
        const int last = inst.interaction_at(p.second).time;
        const auto &cast = a.chars;
        for (int t = a.time + 1; t < last; ++t)
            for (char_id w : m.layer_chars(t)) {
                if (std::binary_search(cast.begin(), cast.end(), w)) continue;
                for (std::size_t i = 0; i < cast.size(); ++i)
                    for (std::size_t j = i + 1; j < cast.size(); ++j) {
                        linear_expr e;
                        e.add(1, m.order(t, cast[i], w)).add(-1, m.order(t, cast[j], w));
                        m.add_row(e.make(sense::eq, 0, row_tag::sbc2));
                    }
            }
    }
    m.mark_sbc();
    return m;
}

ilp_model build_model(const instance &inst, formulation form, bool sbc) {
    ilp_model m = [&] {
        switch (form) {
            case formulation::lin: return build_lin(inst);
            case formulation::qdr: return build_qdr(inst);
            case formulation::plo: return build_plo(inst);
        }
        throw std::invalid_argument("unknown formulation");
    }();
    return sbc ? add_sbc(inst, std::move(m)) : m;
}

void pin_layer(ilp_model &m, int layer, const permutation &perm) {
    const auto &chars = m.layer_chars(layer);
    if (restrict_to(perm, chars).size() != chars.size() || perm.size() != chars.size())
        throw std::invalid_argument("pin_layer: permutation does not match the active characters");
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j) {
            linear_expr e;
            e.add(1, m.order(layer, perm[i], perm[j]));
            m.add_row(e.make(sense::eq, 1, row_tag::fix));
        }
}

// ---------------------------------------------------------------------------

std::string var_name(const ilp_model &m, int var) {
    const auto &v = m.vars().at(var);
    return std::string(v.kind == var_kind::ordering ? "x_" : "y_") + std::to_string(v.layer + 1) +
           "_" + std::to_string(v.u) + "_" + std::to_string(v.v);
}

namespace {

void write_coef(std::ostream &os, double coef, bool first) {
    const bool neg = coef < 0;
    const double mag = std::abs(coef);
    if (first)
        os << (neg ? "- " : "");
    else
        os << (neg ? " - " : " + ");
    if (mag != 1) {
        if (mag == std::floor(mag))
            os << static_cast<long long>(mag) << ' ';
        else
            os << mag << ' ';
    }
}

void write_rhs(std::ostream &os, double rhs) {
    if (rhs == std::floor(rhs))
        os << static_cast<long long>(rhs);
    else
        os << rhs;
}

void write_row(std::ostream &os, const ilp_model &m, const lin_constraint &r,
               const std::string &name) {
    os << ' ' << name << ": ";
    if (r.terms.empty()) os << "0 " << var_name(m, 0);
    bool first = true;
    for (const auto &t : r.terms) {
        write_coef(os, t.coef, first);
        os << var_name(m, t.var);
        first = false;
    }
    os << (r.cmp == sense::le ? " <= " : r.cmp == sense::ge ? " >= " : " = ");
    write_rhs(os, r.rhs);
    os << '\n';
}

}  // namespace

void write_lp(std::ostream &os, const ilp_model &m, lp_lop_rows lop) {
    os << "\\ storyline model " << to_string(m.form()) << (m.has_sbc() ? "+SBC" : "") << '\n';
    os << "\\ objective offset " << m.objective_offset() << '\n';
    os << "Minimize\n obj:";
    bool first = true;
    for (int j = 0; j < m.num_vars(); ++j) {
        if (m.objective()[j] == 0) continue;
        if (first) os << ' ';
        write_coef(os, m.objective()[j], first);
        os << var_name(m, j);
        first = false;
    }
    if (first && m.quadratic().empty()) os << " 0";
    if (!m.quadratic().empty()) {
        // Quadratic part is written doubled inside [ ] / 2.
        os << (first ? " [" : " + [");
        bool qfirst = true;
        for (const auto &q : m.quadratic()) {
            if (qfirst) os << ' ';
            write_coef(os, 2 * q.coef, qfirst);
            os << var_name(m, q.a) << " * " << var_name(m, q.b);
            qfirst = false;
        }
        os << " ] / 2";
    }
    os << "\nSubject To\n";
    std::array<int, row_tag_count> seen{};
    for (const auto &r : m.rows()) {
        const auto tag = static_cast<std::size_t>(r.tag);
        write_row(os, m, r, std::string(to_string(r.tag)) + "_" + std::to_string(seen[tag]++));
    }
    if (lop != lp_lop_rows::omit && m.lop().row_count() > 0) {
        if (lop == lp_lop_rows::lazy) os << "Lazy Constraints\n";
        int count = 0;
        for (int t = 0; t < m.inst().num_layers(); ++t)
            m.lop().for_each_triple(t, [&](char_id a, char_id b, char_id c) {
                for (int which = 0; which < 2; ++which)
                    write_row(os, m, m.lop_row(t, a, b, c, which), "lop_" + std::to_string(count++));
            });
    }
    os << "Bounds\n";
    for (int j = 0; j < m.num_vars(); ++j) os << " 0 <= " << var_name(m, j) << " <= 1\n";
    os << "Binaries\n";
    for (int j = 0; j < m.num_vars(); ++j) os << ' ' << var_name(m, j) << '\n';
    os << "End\n";
}

}  // namespace storyline
