#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "Highs.h"
#include "doctest.h"
#include "storyline/consistency.hpp"
#include "storyline/model.hpp"
#include "storyline/solver.hpp"
#include "support.hpp"

using namespace storyline;
namespace ts = testsupport;

namespace {

std::vector<character> named(int n) {
    std::vector<character> out;
    for (int c = 0; c < n; ++c) out.push_back({c + 1, "c" + std::to_string(c + 1)});
    return out;
}

instance free_chars(int n, int layers) {
    return instance::build(layers, named(n), {}, std::vector<activity_interval>(n, {0, layers - 1}));
}

std::int64_t rows_tagged(const ilp_model &m, row_tag tag) {
    return std::count_if(m.rows().begin(), m.rows().end(), [&](const auto &r) { return r.tag == tag; });
}

// Model rows that every feasible drawing satisfies.
bool base_rows_hold(const ilp_model &m, const std::vector<double> &v) {
    for (const auto &r : m.rows())
        if ((r.tag == row_tag::tree || r.tag == row_tag::cr) && r.violation(v) > 1e-9) return false;
    return true;
}

}  // namespace

TEST_CASE("formulation names") {
    CHECK(parse_formulation("lin") == formulation::lin);
    CHECK(parse_formulation("QDR") == formulation::qdr);
    CHECK(parse_formulation("Plo") == formulation::plo);
    CHECK(to_string(formulation::plo) == "PLO");
    CHECK_THROWS_AS(parse_formulation("mc"), std::invalid_argument);
}

TEST_CASE("two free characters over two layers") {
    const auto inst = free_chars(2, 2);
    const auto m = build_lin(inst);
    const auto s = m.stats();
    CHECK(s.ordering_vars == 2);
    CHECK(s.crossing_vars == 1);
    CHECK(s.rows_of(row_tag::cr) == 2);
    CHECK(s.lop_rows == 0);
    CHECK(s.rows_of(row_tag::tree) == 0);
    CHECK(m.ordering_var(0, 0, 1) >= 0);
    CHECK_THROWS(m.ordering_var(0, 1, 0));
    CHECK(m.crossing_var(0, 0, 1) >= 0);
    CHECK(var_name(m, m.ordering_var(1, 0, 1)) == "x_2_0_1");
    CHECK(var_name(m, m.crossing_var(0, 0, 1)) == "y_1_0_1");
}

TEST_CASE("projection folds complemented literals into the right-hand side") {
    const auto m = build_lin(free_chars(3, 1));
    const auto lit = m.order(0, 2, 0);
    CHECK(lit.negated);
    CHECK(lit.var == m.ordering_var(0, 0, 2));
    CHECK(!m.order(0, 0, 2).negated);

    // 2 x_{0,2,0} + x_{0,0,1} <= 2  becomes  -2 x_{0,0,2} + x_{0,0,1} <= 0
    linear_expr e;
    e.add(2, m.order(0, 2, 0)).add(1, m.order(0, 0, 1));
    const auto row = e.make(sense::le, 2, row_tag::tree);
    CHECK(row.rhs == 0);
    REQUIRE(row.terms.size() == 2);
    const auto find = [&](int var) {
        return std::find_if(row.terms.begin(), row.terms.end(), [&](const lin_term &t) { return t.var == var; });
    };
    CHECK(find(m.ordering_var(0, 0, 2))->coef == -2);
    CHECK(find(m.ordering_var(0, 0, 1))->coef == 1);

    // Terms on one variable merge; cancelling terms vanish.
    linear_expr same;
    same.add(1, m.order(0, 0, 1)).add(1, m.order(0, 1, 0));
    const auto trivial = same.make(sense::eq, 1, row_tag::tree);
    CHECK(trivial.terms.empty());
    CHECK(trivial.rhs == 0);
}

TEST_CASE("one triple yields one pair of LOP rows") {
    const auto m = build_lin(free_chars(3, 1));
    CHECK(m.lop().triple_count(0) == 1);
    CHECK(m.lop().row_count() == 2);
    const auto x01 = m.ordering_var(0, 0, 1), x12 = m.ordering_var(0, 1, 2), x02 = m.ordering_var(0, 0, 2);
    // x01 + x12 + x20 <= 2 with x20 = 1 - x02
    const auto upper = m.lop_row(0, 0, 1, 2, 0);
    CHECK(upper.cmp == sense::le);
    CHECK(upper.rhs == 1);
    CHECK(upper.lazy);
    // x10 + x21 + x02 <= 2, complemented: x01 + x12 - x02 >= 0
    const auto lower = m.lop_row(0, 0, 1, 2, 1);
    CHECK(lower.cmp == sense::ge);
    CHECK(lower.rhs == 0);
    for (const auto *row : {&upper, &lower}) {
        for (const auto &t : row->terms) {
            if (t.var == x02)
                CHECK(t.coef == -1);
            else
                CHECK(bool((t.var == x01 || t.var == x12) && t.coef == 1));
        }
    }
    // Exactly the two cyclic assignments violate a row.
    int violated = 0;
    for (int bits = 0; bits < 8; ++bits) {
        std::vector<double> v(m.num_vars(), 0);
        v[x01] = bits & 1;
        v[x12] = (bits >> 1) & 1;
        v[x02] = (bits >> 2) & 1;
        const bool cyclic = (v[x01] == 1 && v[x12] == 1 && v[x02] == 0) ||
                            (v[x01] == 0 && v[x12] == 0 && v[x02] == 1);
        const bool bad = upper.violation(v) > 0 || lower.violation(v) > 0;
        CHECK(bad == cyclic);
        violated += bad;
    }
    CHECK(violated == 2);
}

TEST_CASE("tree rows tie an interaction to each outsider") {
    const auto inst = instance::build(1, named(4), {{0, {0, 1}}, {0, {2}}, {0, {3}}});
    const auto m = build_lin(inst);
    // one pair inside, two outsiders
    CHECK(rows_tagged(m, row_tag::tree) == 2);
}

TEST_CASE("quadratic objective") {
    const auto single = build_qdr(free_chars(3, 1));
    CHECK(single.quadratic().empty());
    CHECK(std::all_of(single.objective().begin(), single.objective().end(), [](double c) { return c == 0; }));

    // x1 (1 - x2) + (1 - x1) x2 = x1 + x2 - 2 x1 x2
    const auto m = build_qdr(free_chars(2, 2));
    CHECK(m.stats().crossing_vars == 0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            std::vector<double> v(m.num_vars());
            v[m.ordering_var(0, 0, 1)] = a;
            v[m.ordering_var(1, 0, 1)] = b;
            CHECK(m.evaluate(v) == doctest::Approx(a * (1 - b) + (1 - a) * b));
        }
    double quad = 0;
    for (const auto &q : m.quadratic()) quad += q.coef;
    CHECK(quad == -2);
    CHECK(m.objective()[m.ordering_var(0, 0, 1)] == 1);
    CHECK(m.objective()[m.ordering_var(1, 0, 1)] == 1);
}

TEST_CASE("encoded drawings evaluate to their crossing count") {
    ts::rng_t rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 1, 7), ts::uniform(rng, 1, 7));
        const auto d = ts::random_drawing(inst, rng);
        for (auto f : {formulation::lin, formulation::qdr, formulation::plo}) {
            const auto m = build_model(inst, f, false);
            const auto v = m.encode(d);
            REQUIRE(m.evaluate(v) == doctest::Approx(static_cast<double>(ts::naive_total(d))));
            REQUIRE(base_rows_hold(m, v));
            REQUIRE(separate_lop(m, v, true, 1e-6, 1u << 30, lop_scope::full).empty());
            REQUIRE(decode_solution(m, v) == d);
        }
    }
}

TEST_CASE("consistent drawings satisfy the symmetry-breaking rows") {
    ts::rng_t rng(4);
    for (int i = 0; i < 200; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 2, 7), ts::uniform(rng, 2, 7));
        const auto d = make_consistent(inst, ts::random_drawing(inst, rng));
        const auto m = build_model(inst, formulation::lin, true);
        const auto v = m.encode(d);
        for (const auto &r : m.rows())
            if (r.tag == row_tag::sbc1 || r.tag == row_tag::sbc2) REQUIRE(r.violation(v) == 0);
    }
}

TEST_CASE("symmetry-breaking row counts") {
    // No interaction carries over to a later layer: nothing to add.
    const auto none = instance::build(2, named(4), {{0, {0, 1}}, {1, {2, 3}}});
    const auto m0 = build_model(none, formulation::lin, true);
    CHECK(rows_tagged(m0, row_tag::sbc1) + rows_tagged(m0, row_tag::sbc2) == 0);
    CHECK(m0.has_sbc());

    // Same cast at consecutive layers with one outsider: no layer in between.
    const std::vector<activity_interval> all3(3, {0, 2});
    const auto next = instance::build(3, named(3), {{0, {0, 1}}, {1, {0, 1}}, {2, {2}}}, all3);
    const auto m1 = build_model(next, formulation::lin, true);
    CHECK(rows_tagged(m1, row_tag::sbc2) == 0);
    CHECK(rows_tagged(m1, row_tag::sbc1) == 1);  // layer 0 copies the order of layer 1

    // One layer in between: one pair times one outsider there.
    const auto gap = instance::build(3, named(3), {{0, {0, 1}}, {2, {0, 1}}, {1, {2}}}, all3);
    const auto m2 = build_model(gap, formulation::lin, true);
    CHECK(rows_tagged(m2, row_tag::sbc2) == 1);
    CHECK(rows_tagged(m2, row_tag::sbc1) == 2);

    CHECK_THROWS_AS(add_sbc(none, build_lin(gap)), std::invalid_argument);
}

TEST_CASE("representative is the smallest member") {
    CHECK(representative_char(interaction{0, {7}}) == 7);
    CHECK(representative_char(interaction{0, {3, 4, 9}}) == 3);
}

TEST_CASE("reduced ordering rows on eligible layers") {
    // Layer 1 has two interactions: no reduction.
    const auto two = instance::build(2, named(4), {{0, {0, 1, 2, 3}}, {1, {0, 1}}, {1, {2, 3}}});
    CHECK(!plo_eligible(two, 1));
    CHECK(!build_plo(two).lop().rule(1).reduced);
    CHECK(build_plo(two).lop().row_count() == build_lin(two).lop().row_count());

    // k outsiders plus a pair that was already active: 2 * C(k, 2) rows, none inside.
    for (int k = 2; k <= 9; ++k) {
        const int n = k + 2;
        std::vector<interaction> inters{{0, {0, 1}}, {1, {0, 1}}};
        const auto inst = instance::build(2, named(n), inters, std::vector<activity_interval>(n, {0, 1}));
        REQUIRE(plo_eligible(inst, 1));
        const auto plo = build_plo(inst);
        CHECK(plo.lop().rule(1).inside_propagated);
        CHECK(plo.lop().row_count(1) == k * (k - 1));
        CHECK(build_lin(inst).lop().row_count(1) == n * (n - 1) * (n - 2) / 3);
        CHECK(rows_tagged(plo, row_tag::prop_r1) == k * (k - 1));
        CHECK(rows_tagged(plo, row_tag::prop_r2) == k * (k - 1));
        CHECK(rows_tagged(plo, row_tag::prop_i) == 1);
    }

    // A character entering outside the interaction blocks the reduction.
    const auto fresh = instance::build(2, named(3), {{0, {0, 1}}, {1, {0, 1}}},
                                       std::vector<activity_interval>{{0, 1}, {0, 1}, {1, 1}});
    CHECK(!plo_eligible(fresh, 1));
    // Entering inside it keeps the reduction but not the propagation of inner triples.
    const auto joins = instance::build(2, named(4), {{0, {0, 1}}, {1, {0, 1, 2}}},
                                       std::vector<activity_interval>{{0, 1}, {0, 1}, {1, 1}, {0, 1}});
    CHECK(plo_eligible(joins, 1));
    CHECK(!build_plo(joins).lop().rule(1).inside_propagated);
    CHECK(build_plo(joins).lop().triple_count(1) == 1);  // the inner triple; one outsider forms none
}

TEST_CASE("pinning a layer fixes its ordering variables") {
    auto m = build_lin(free_chars(3, 2));
    pin_layer(m, 1, {2, 0, 1});
    CHECK(rows_tagged(m, row_tag::fix) == 3);
    const drawing d{{{0, 1, 2}, {2, 0, 1}}};
    const auto v = m.encode(d);
    for (const auto &r : m.rows())
        if (r.tag == row_tag::fix) CHECK(r.violation(v) == 0);
    CHECK_THROWS_AS(pin_layer(m, 0, {0, 1}), std::invalid_argument);
}

TEST_CASE("LP text of the smallest model") {
    std::ostringstream os;
    write_lp(os, build_lin(free_chars(2, 2)));
    CHECK(os.str() ==
          "\\ storyline model LIN\n"
          "\\ objective offset 0\n"
          "Minimize\n"
          " obj: y_1_0_1\n"
          "Subject To\n"
          " cr_0: - x_1_0_1 + x_2_0_1 + y_1_0_1 >= 0\n"
          " cr_1: x_1_0_1 - x_2_0_1 + y_1_0_1 >= 0\n"
          "Bounds\n"
          " 0 <= x_1_0_1 <= 1\n"
          " 0 <= x_2_0_1 <= 1\n"
          " 0 <= y_1_0_1 <= 1\n"
          "Binaries\n"
          " x_1_0_1\n"
          " x_2_0_1\n"
          " y_1_0_1\n"
          "End\n");

    std::ostringstream lazy, rows, omit;
    const auto m3 = build_lin(free_chars(3, 1));
    write_lp(lazy, m3);
    write_lp(rows, m3, lp_lop_rows::constraints);
    write_lp(omit, m3, lp_lop_rows::omit);
    CHECK(lazy.str().find("Lazy Constraints\n lop_0: x_1_0_1 - x_1_0_2 + x_1_1_2 <= 1\n") != std::string::npos);
    CHECK(rows.str().find("Lazy") == std::string::npos);
    CHECK(rows.str().find(" lop_1: x_1_0_1 - x_1_0_2 + x_1_1_2 >= 0\n") != std::string::npos);
    CHECK(omit.str().find("lop_") == std::string::npos);
}

TEST_CASE("written LP files solve to the exhaustive optimum in an external reader") {
    const auto dir = std::filesystem::temp_directory_path() / "storyline-lp-test";
    std::filesystem::create_directories(dir);
    for (int i = 0; i < 40; ++i) {
        const auto inst = ts::small_instance(i);
        const auto best = ts::reference_optimum(inst);
        for (auto f : {formulation::lin, formulation::plo})
            for (bool sbc : {false, true}) {
                const auto m = build_model(inst, f, sbc);
                const auto path = dir / ("m" + std::to_string(i) + ".lp");
                {
                    std::ofstream os(path);
                    write_lp(os, m, lp_lop_rows::constraints);
                }
                Highs h;
                h.setOptionValue("output_flag", false);
                REQUIRE(h.readModel(path.string()) != HighsStatus::kError);
                REQUIRE(h.run() != HighsStatus::kError);
                if (h.getNumCol() == 0) {
                    CHECK(best == 0);
                    continue;
                }
                CAPTURE(i);
                REQUIRE(h.getModelStatus() == HighsModelStatus::kOptimal);
                CHECK(std::llround(h.getInfo().objective_function_value + m.objective_offset()) == best);
            }
    }
    std::filesystem::remove_all(dir);
}
