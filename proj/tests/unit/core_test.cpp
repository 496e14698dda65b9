#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "storyline/drawing.hpp"
#include "storyline/error.hpp"
#include "storyline/instance.hpp"
#include "support.hpp"

using namespace storyline;
namespace ts = testsupport;

namespace {

std::vector<character> named(int n) {
    std::vector<character> out;
    for (int c = 0; c < n; ++c) out.push_back({c + 1, "c" + std::to_string(c + 1)});
    return out;
}

}  // namespace

TEST_CASE("activity defaults to first through last interaction") {
    const auto inst = instance::build(4, named(3), {{0, {0, 1}}, {2, {1, 2}}, {3, {0}}});
    CHECK(inst.activity(0) == activity_interval{0, 3});
    CHECK(inst.activity(1) == activity_interval{0, 2});
    CHECK(inst.activity(2) == activity_interval{2, 2});
    CHECK(inst.active_chars(1) == std::vector<char_id>{0, 1});
    CHECK(inst.active_chars(3) == std::vector<char_id>{0});
    CHECK(inst.interacting_chars(1).empty());
    CHECK(inst.active_interval(0, 2) == std::vector<char_id>{0, 1});
    CHECK(inst.active_interval(2, 3) == std::vector<char_id>{0});
    CHECK(inst.interaction_of(1, 2) == 1);
    CHECK(inst.interaction_of(0, 1) == -1);
    CHECK_THROWS_AS(inst.active_interval(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(inst.active_chars(4), std::out_of_range);
}

TEST_CASE("interaction members are sorted on build") {
    const auto inst = instance::build(1, named(3), {{0, {2, 0}}, {0, {1}}});
    CHECK(inst.interaction_at(0).chars == std::vector<char_id>{0, 2});
}

TEST_CASE("structural invariants are enforced") {
    CHECK_THROWS_AS(instance::build(0, named(1), {}), invalid_instance);
    CHECK_THROWS_AS(instance::build(1, {}, {}), invalid_instance);
    CHECK_THROWS_AS(instance::build(2, named(2), {{2, {0}}}), invalid_instance);
    CHECK_THROWS_AS(instance::build(2, named(2), {{0, {}}}), invalid_instance);
    CHECK_THROWS_AS(instance::build(2, named(2), {{0, {1, 1}}}), invalid_instance);
    CHECK_THROWS_AS(instance::build(2, named(2), {{0, {5}}}), invalid_instance);
    // two interactions sharing a character at one layer
    CHECK_THROWS_AS(instance::build(1, named(2), {{0, {0, 1}}, {0, {1}}}), invalid_instance);
    // character without interactions and without activity
    CHECK_THROWS_AS(instance::build(1, named(2), {{0, {0}}}), invalid_instance);
    // interaction outside the explicit activity
    CHECK_THROWS_AS(instance::build(2, named(1), {{1, {0}}}, std::vector<activity_interval>{{0, 0}}),
                    invalid_instance);
    // a layer nobody is active at
    CHECK_THROWS_AS(instance::build(3, named(1), {{0, {0}}}, std::vector<activity_interval>{{0, 1}}),
                    invalid_instance);
    CHECK_THROWS_AS(instance::build(1, named(2), {{0, {0}}}, std::vector<activity_interval>{{0, 0}}),
                    invalid_instance);
}

TEST_CASE("empty layers are kept unless dropping is requested") {
    const std::vector<interaction> inters{{0, {0, 1}}, {2, {0, 1}}};
    const auto kept = instance::build(3, named(2), inters);
    CHECK(kept.num_layers() == 3);
    CHECK(kept.interactions_at(1).empty());
    const auto dropped = instance::build(3, named(2), inters, std::nullopt, {true});
    CHECK(dropped.num_layers() == 2);
    CHECK(dropped.interaction_at(1).time == 1);
}

TEST_CASE("crossings between permutations") {
    const permutation a{0, 1, 2}, b{2, 1, 0};
    CHECK(crossings_between(a, a) == 0);
    CHECK(crossings_between(a, b) == 3);
    // only common elements count
    CHECK(crossings_between(permutation{0, 3, 1}, permutation{1, 4, 0}) == 1);
    CHECK(crossings_between(permutation{}, permutation{1}) == 0);
    CHECK_THROWS_AS(crossings_between(permutation{0, 0}, permutation{0}), std::invalid_argument);
    CHECK_THROWS_AS(crossings_between(permutation{-1}, permutation{0}), std::invalid_argument);
}

TEST_CASE("inversion count matches pair enumeration on every permutation up to size 8") {
    for (int n = 0; n <= 8; ++n) {
        permutation id(n);
        std::iota(id.begin(), id.end(), 0);
        auto pi = id;
        long checked = 0;
        do {
            REQUIRE(crossings_between(id, pi) == ts::naive_crossings(id, pi));
            std::vector<int> seq(pi.begin(), pi.end());
            REQUIRE(count_inversions(seq) == ts::naive_crossings(id, pi));
            ++checked;
        } while (std::next_permutation(pi.begin(), pi.end()));
        CHECK(checked > 0);
    }
}

TEST_CASE("crossing count is symmetric and handles partial overlap") {
    ts::rng_t rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<char_id> pool(12);
        std::iota(pool.begin(), pool.end(), 0);
        ts::shuffle(pool, rng);
        permutation a(pool.begin(), pool.begin() + ts::uniform(rng, 0, 12));
        ts::shuffle(pool, rng);
        permutation b(pool.begin(), pool.begin() + ts::uniform(rng, 0, 12));
        REQUIRE(crossings_between(a, b) == crossings_between(b, a));
        REQUIRE(crossings_between(a, b) == ts::naive_crossings(a, b));
    }
}

TEST_CASE("restrict_to keeps the original order") {
    const permutation pi{4, 2, 0, 3, 1};
    const std::vector<char_id> keep{1, 4, 3};
    CHECK(restrict_to(pi, keep) == permutation{4, 3, 1});
}

TEST_CASE("validate reports each kind of violation") {
    const auto inst = instance::build(2, named(3), {{0, {0, 2}}, {1, {0, 1, 2}}},
                                      std::vector<activity_interval>(3, {0, 1}));
    drawing ok{{{0, 2, 1}, {1, 0, 2}}};
    CHECK(validate(inst, ok).empty());
    CHECK_NOTHROW(require_valid(inst, ok));

    drawing split{{{0, 1, 2}, {1, 0, 2}}};
    auto v = validate(inst, split);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == violation_kind::split_interaction);
    CHECK(v[0].layer == 0);
    CHECK_THROWS_AS(require_valid(inst, split), invalid_drawing);

    drawing missing{{{0, 2}, {1, 0, 2}}};
    v = validate(inst, missing);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == violation_kind::missing_character);
    CHECK(v[0].character == 1);

    drawing dup{{{0, 2, 1, 1}, {1, 0, 2}}};
    CHECK(validate(inst, dup).front().kind == violation_kind::duplicate_character);

    drawing unknown{{{0, 2, 1, 7}, {1, 0, 2}}};
    CHECK(validate(inst, unknown).front().kind == violation_kind::unknown_character);

    drawing short_d{{{0, 2, 1}}};
    CHECK(validate(inst, short_d).front().kind == violation_kind::layer_count);
}

TEST_CASE("total crossings per gap") {
    const auto inst = instance::build(3, named(3), {{0, {0, 1, 2}}, {1, {0}}, {2, {1, 2}}},
                                      std::vector<activity_interval>(3, {0, 2}));
    const drawing d{{{0, 1, 2}, {2, 1, 0}, {1, 2, 0}}};
    const auto cr = total_crossings(inst, d);
    CHECK(cr.per_gap == std::vector<std::int64_t>{3, 1});
    CHECK(cr.total == 4);
    CHECK(gap_crossings(d, 1) == 1);

    const auto single = instance::build(1, named(2), {{0, {0, 1}}});
    CHECK(total_crossings(single, drawing{{{1, 0}}}).total == 0);
    CHECK_THROWS_AS(total_crossings(inst, drawing{{{0, 1, 2}}}), invalid_drawing);
}

TEST_CASE("random drawings are feasible and counted like the pair scan") {
    ts::rng_t rng(11);
    for (int i = 0; i < 300; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 1, 9), ts::uniform(rng, 1, 9));
        const auto d = ts::random_drawing(inst, rng);
        REQUIRE(validate(inst, d).empty());
        REQUIRE(total_crossings(inst, d).total == ts::naive_total(d));
    }
}
