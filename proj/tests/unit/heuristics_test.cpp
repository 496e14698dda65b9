#include "doctest.h"
#include "storyline/consistency.hpp"
#include "storyline/error.hpp"
#include "storyline/heuristics.hpp"
#include "support.hpp"

using namespace storyline;
namespace ts = testsupport;

namespace {

std::vector<character> named(int n) {
    std::vector<character> out;
    for (int c = 0; c < n; ++c) out.push_back({c + 1, "c" + std::to_string(c + 1)});
    return out;
}

// n characters active on every layer, no interactions beyond one singleton
// on layer 0 per character.
instance all_free(int n, int layers) {
    std::vector<interaction> inters;
    for (char_id c = 0; c < n; ++c) inters.push_back({0, {c}});
    return instance::build(layers, named(n), inters, std::vector<activity_interval>(n, {0, layers - 1}));
}

}  // namespace

TEST_CASE("half-valued points follow the previous layer") {
    const auto inst = all_free(3, 2);
    const auto m = build_model(inst, formulation::lin, false);
    const std::vector<double> half(m.num_vars(), 0.5);
    rounding_options ro;
    ro.locked_prefix = {{2, 0, 1}};
    const auto d = round_fractional(m, half, ro);
    CHECK(d.layers[0] == permutation{2, 0, 1});
    CHECK(d.layers[1] == permutation{2, 0, 1});
    CHECK_THROWS_AS(round_fractional(m, std::vector<double>(1, 0.5)), std::invalid_argument);
}

TEST_CASE("integral points round to the drawing they encode") {
    ts::rng_t rng(51);
    for (int i = 0; i < 300; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 1, 8), ts::uniform(rng, 1, 6));
        const auto d = ts::random_drawing(inst, rng);
        const auto m = build_model(inst, formulation::lin, false);
        REQUIRE(round_fractional(m, m.encode(d)) == d);
    }
}

TEST_CASE("fractional rounding yields feasible drawings") {
    ts::rng_t rng(52);
    for (int i = 0; i < 300; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 1, 8), ts::uniform(rng, 1, 6));
        const auto m = build_model(inst, formulation::plo, true);
        std::vector<double> v(m.num_vars());
        for (auto &x : v) x = static_cast<double>(rng() % 1001) / 1000.0;
        rounding_options ro;
        ro.sbc_active = true;
        REQUIRE(ts::feasible(inst, round_fractional(m, v, ro)));
    }
}

TEST_CASE("double crossings inside a free stretch are removed") {
    const auto inst = all_free(3, 4);
    const drawing d{{{0, 1, 2}, {1, 0, 2}, {1, 0, 2}, {0, 1, 2}}};
    CHECK(ts::naive_total(d) == 2);
    const auto out = remove_double_crossings(inst, d);
    CHECK(ts::naive_total(out) == 0);
    CHECK(out == drawing{{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {0, 1, 2}}});
}

TEST_CASE("double crossings split by an interaction stay") {
    // 1 talks to 2 on layer 1, so 0 and 1 do not travel together there.
    const auto inst = instance::build(3, named(3), {{0, {0}}, {1, {1, 2}}},
                                      std::vector<activity_interval>(3, {0, 2}));
    const drawing d{{{0, 1, 2}, {1, 2, 0}, {0, 1, 2}}};
    CHECK(remove_double_crossings(inst, d).layers[1] == permutation{1, 2, 0});
}

TEST_CASE("runs inherit the previous order") {
    const auto inst = instance::build(2, named(3), {{0, {0}}, {1, {0, 1}}},
                                      std::vector<activity_interval>(3, {0, 1}));
    const drawing d{{{0, 1, 2}, {2, 1, 0}}};
    const auto out = push_crossings(inst, d);
    CHECK(out.layers[0] == permutation{0, 1, 2});
    CHECK(out.layers[1] == permutation{2, 0, 1});
    CHECK(ts::naive_total(out) == 2);

    const auto free3 = all_free(3, 2);
    CHECK(push_crossings(free3, d).layers[1] == permutation{0, 1, 2});
}

TEST_CASE("barycenter sweep straightens a single-interaction layer") {
    const auto inst = instance::build(3, named(3), {{0, {0}}, {1, {1, 2}}, {2, {0}}},
                                      std::vector<activity_interval>(3, {0, 2}));
    const drawing d{{{0, 1, 2}, {1, 2, 0}, {0, 1, 2}}};
    CHECK(ts::naive_total(d) == 4);
    const auto out = barycenter_sl(inst, d);
    CHECK(out == drawing{{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}});
}

TEST_CASE("improvement steps keep drawings feasible and never add crossings") {
    ts::rng_t rng(53);
    for (int i = 0; i < 400; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 1, 8), ts::uniform(rng, 1, 7));
        const auto d = ts::random_drawing(inst, rng);
        const auto before = ts::naive_total(d);
        for (const auto &out : {remove_double_crossings(inst, d), barycenter_sl(inst, d), improve(inst, d)}) {
            REQUIRE(ts::feasible(inst, out));
            REQUIRE(ts::naive_total(out) <= before);
        }
        REQUIRE(ts::feasible(inst, push_crossings(inst, d)));
    }
    CHECK_THROWS_AS(improve(all_free(2, 2), drawing{{{0, 1}}}), invalid_drawing);
}

TEST_CASE("greedy baseline is feasible") {
    ts::rng_t rng(54);
    for (int i = 0; i < 300; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 1, 10), ts::uniform(rng, 1, 10));
        REQUIRE(ts::feasible(inst, greedy_baseline(inst)));
    }
    // a free layer copies the previous order
    const auto g = greedy_baseline(all_free(4, 3));
    CHECK(g.layers[1] == g.layers[0]);
    CHECK(g.layers[2] == g.layers[0]);
}

TEST_CASE("slicing") {
    const auto inst = ts::small_instance(11);
    solve_options o;
    SUBCASE("one window is exact") {
        const auto r = initial_slicing(inst, {1, inst.num_layers() + 1}, o);
        CHECK(!r.fallback);
        CHECK(r.windows == 1);
        CHECK(ts::naive_total(r.d) == ts::reference_optimum(inst));
    }
    SUBCASE("overlapping windows stay feasible") {
        generator_params p;
        p.chars = 6;
        p.layers = 14;
        p.max_size = 3;
        p.max_interactions = 2;
        const auto longer = generate_instance(p, 9);
        const auto r = initial_slicing(longer, {2, 4}, o);
        CHECK(!r.fallback);
        CHECK(r.windows > 1);
        CHECK(ts::feasible(longer, r.d));
        CHECK(ts::naive_total(r.d) >= solve_bruteforce(longer).crossings);
    }
    SUBCASE("a failing window falls back to greedy") {
        o.backend = "no-such-backend";
        const auto r = initial_slicing(inst, {2, 4}, o);
        CHECK(r.fallback);
        CHECK(!r.message.empty());
        CHECK(r.d == greedy_baseline(inst));
    }
    SUBCASE("bad stride") {
        CHECK_THROWS_AS(initial_slicing(inst, {4, 4}, o), std::invalid_argument);
        CHECK_THROWS_AS(initial_slicing(inst, {0, 4}, o), std::invalid_argument);
    }
}
