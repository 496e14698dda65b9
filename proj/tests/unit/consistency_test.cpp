#include <algorithm>

#include "doctest.h"
#include "storyline/consistency.hpp"
#include "storyline/error.hpp"
#include "support.hpp"

using namespace storyline;
namespace ts = testsupport;

namespace {

std::vector<character> named(int n) {
    std::vector<character> out;
    for (int c = 0; c < n; ++c) out.push_back({c + 1, "c" + std::to_string(c + 1)});
    return out;
}

// a..g as 0..6
constexpr char_id a = 0, b = 1, c = 2, d = 3, e = 4, f = 5, g = 6;

}  // namespace

TEST_CASE("assign moves a subset into the slots it already occupies") {
    const permutation pi{c, e, b, d, f, a, g};
    CHECK(assign(pi, permutation{a, b, c}) == permutation{a, e, b, d, f, c, g});
    CHECK(assign(pi, restrict_to(pi, std::vector<char_id>{a, d, g})) == pi);
    CHECK(assign(pi, permutation{}) == pi);
    CHECK_THROWS_AS(assign(permutation{0, 1}, permutation{2}), std::invalid_argument);
}

TEST_CASE("assign post-conditions on random inputs") {
    ts::rng_t rng(21);
    for (int trial = 0; trial < 3000; ++trial) {
        std::vector<char_id> pi(ts::uniform(rng, 0, 10));
        for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = static_cast<char_id>(i);
        ts::shuffle(pi, rng);
        std::vector<char_id> phi;
        for (char_id x : pi)
            if (rng() % 2) phi.push_back(x);
        ts::shuffle(phi, rng);
        const auto out = assign(pi, phi);
        REQUIRE(out.size() == pi.size());
        REQUIRE(ts::project(out, phi) == phi);
        std::vector<char_id> rest;
        for (char_id x : pi)
            if (std::find(phi.begin(), phi.end(), x) == phi.end()) rest.push_back(x);
        REQUIRE(ts::project(out, rest) == ts::project(pi, rest));
        for (std::size_t i = 0; i < pi.size(); ++i) {
            const bool was = std::find(phi.begin(), phi.end(), pi[i]) != phi.end();
            const bool is = std::find(phi.begin(), phi.end(), out[i]) != phi.end();
            REQUIRE(was == is);
        }
    }
}

TEST_CASE("anchor layer") {
    // {0,1} meet at layers 0 and 3; layer 2 has 1 talking to 2, so the anchor is 2.
    const auto inst = instance::build(4, named(3), {{0, {0, 1}}, {2, {1, 2}}, {3, {0, 1}}});
    CHECK(anchor_layer(inst, 0) == 0);
    CHECK(anchor_layer(inst, 2) == 2);
    CHECK(anchor_layer(inst, 1) == 2);  // 2 only becomes active at layer 2

    // Supersets at every layer keep the cast together back to the start.
    const auto nested = instance::build(3, named(3), {{0, {0, 1, 2}}, {1, {0, 1, 2}}, {2, {0, 1}}});
    CHECK(anchor_layer(nested, 2) == 0);
}

TEST_CASE("anchor layer matches a scan of the definition") {
    ts::rng_t rng(5);
    for (int i = 0; i < 300; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 2, 7), ts::uniform(rng, 1, 8));
        for (int k = 0; k < inst.num_interactions(); ++k) {
            const auto &I = inst.interaction_at(k);
            int expected = I.time;
            for (int j = 0; j <= I.time; ++j) {
                bool ok = true;
                for (int t = j; t <= I.time; ++t)
                    for (char_id x : I.chars) ok = ok && inst.is_active(x, t);
                for (int t = j + 1; t <= I.time && ok; ++t) {
                    std::vector<int> homes;
                    for (char_id x : I.chars) homes.push_back(inst.interaction_of(x, t));
                    const bool untouched = std::all_of(homes.begin(), homes.end(), [](int h) { return h < 0; });
                    const bool one = homes.front() >= 0 && std::all_of(homes.begin(), homes.end(),
                                                                       [&](int h) { return h == homes.front(); });
                    ok = untouched || one;
                }
                if (ok) {
                    expected = j;
                    break;
                }
            }
            REQUIRE(anchor_layer(inst, k) == expected);
        }
    }
}

TEST_CASE("type-1 violations on a hand-built instance") {
    // {0,1} interact at layer 2; both are free at layers 0 and 1.
    const auto inst = instance::build(3, named(3), {{0, {2}}, {2, {0, 1}}},
                                      std::vector<activity_interval>{{0, 2}, {0, 2}, {0, 2}});
    CHECK(anchor_layer(inst, 1) == 0);
    const drawing swapped{{{0, 1, 2}, {1, 0, 2}, {0, 1, 2}}};
    const auto v = type1_violations(inst, swapped);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == type1_violation{1, 1});

    const auto fixed = repair_type1(inst, swapped);
    CHECK(type1_violations(inst, fixed).empty());
    CHECK(total_crossings(inst, fixed).total <= total_crossings(inst, swapped).total);

    const drawing clean{{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}};
    CHECK(check_consistency(inst, clean).consistent());
    CHECK(repair_type1(inst, clean) == clean);
}

TEST_CASE("type-2 pairs and violations") {
    // {0,1} meet at 0 and 3, untouched in between; 2 is a free outsider.
    const auto inst = instance::build(4, named(3), {{0, {0, 1}}, {3, {0, 1}}, {1, {2}}},
                                      std::vector<activity_interval>{{0, 3}, {0, 3}, {0, 3}});
    const auto pairs = qualifying_pairs(inst);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0] == type2_pair{0, 1});

    const drawing split{{{0, 1, 2}, {0, 2, 1}, {0, 2, 1}, {0, 1, 2}}};
    const auto v = type2_violations(inst, split);
    CHECK(v.size() == 2);
    const auto fixed = repair_type2(inst, split);
    CHECK(type2_violations(inst, fixed).empty());
    CHECK(total_crossings(inst, fixed).total <= total_crossings(inst, split).total);

    // A third interaction splitting the cast disqualifies the pair.
    const auto broken = instance::build(4, named(3), {{0, {0, 1}}, {3, {0, 1}}, {1, {1, 2}}});
    CHECK(qualifying_pairs(broken).empty());
}

TEST_CASE("single layer drawings are consistent") {
    const auto inst = instance::build(1, named(3), {{0, {0, 2}}, {0, {1}}});
    const drawing d{{{1, 2, 0}}};
    CHECK(check_consistency(inst, d).consistent());
    CHECK(make_consistent(inst, d) == d);
}

TEST_CASE("kept_together") {
    const auto inst = instance::build(2, named(4), {{0, {0, 1, 2}}, {1, {0, 1}}, {1, {2, 3}}});
    const std::vector<char_id> pair{0, 1}, three{0, 1, 2}, free{3};
    CHECK(kept_together(inst, pair, 0));
    CHECK(kept_together(inst, pair, 1));
    CHECK(!kept_together(inst, three, 1));
    CHECK(kept_together(inst, free, 0));
}

TEST_CASE("repairs reject infeasible drawings") {
    const auto inst = instance::build(2, named(2), {{0, {0, 1}}, {1, {0, 1}}});
    CHECK_THROWS_AS(repair_type1(inst, drawing{{{0, 1}}}), invalid_drawing);
    CHECK_THROWS_AS(check_consistency(inst, drawing{{{0}, {0, 1}}}), invalid_drawing);
}
