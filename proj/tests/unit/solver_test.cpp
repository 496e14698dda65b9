#include <algorithm>
#include <cstdlib>

#include "doctest.h"
#include "storyline/backend.hpp"
#include "storyline/error.hpp"
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

std::int64_t factorial(int n) {
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// units! * prod |I|!, where units are interactions plus free active characters
std::int64_t block_count(const instance &inst, int t) {
    const auto active = ts::active_at(inst, t);
    int members = 0, units = 0;
    std::int64_t inner = 1;
    for (const auto &inter : inst.interactions())
        if (inter.time == t) {
            ++units;
            members += static_cast<int>(inter.chars.size());
            inner *= factorial(static_cast<int>(inter.chars.size()));
        }
    units += static_cast<int>(active.size()) - members;
    return factorial(units) * inner;
}

}  // namespace

TEST_CASE("feasible permutations match filtering and the block formula") {
    ts::rng_t rng(31);
    for (int i = 0; i < 200; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 1, 7), ts::uniform(rng, 1, 5));
        for (int t = 0; t < inst.num_layers(); ++t) {
            const auto perms = feasible_permutations(inst, t);
            REQUIRE(perms == ts::enumerate_layer(inst, t));
            REQUIRE(count_feasible_permutations(inst, t) == block_count(inst, t));
        }
    }
}

TEST_CASE("three free characters over three layers") {
    // 6^3 drawings; every layer can copy the first, so the optimum is 0.
    const auto inst = instance::build(3, named(3), {{0, {0}}, {2, {1}}, {1, {2}}},
                                      std::vector<activity_interval>(3, {0, 2}));
    std::int64_t drawings = 0;
    for (const auto &p0 : ts::enumerate_layer(inst, 0))
        for (const auto &p1 : ts::enumerate_layer(inst, 1))
            for (const auto &p2 : ts::enumerate_layer(inst, 2)) {
                (void)p0, (void)p1, (void)p2;
                ++drawings;
            }
    CHECK(drawings == 216);
    const auto bf = solve_bruteforce(inst);
    CHECK(bf.crossings == 0);
    CHECK(ts::feasible(inst, bf.d));
}

TEST_CASE("exhaustive search equals the reference optimum") {
    for (std::uint64_t i = 0; i < 120; ++i) {
        const auto inst = ts::small_instance(i);
        const auto bf = solve_bruteforce(inst);
        REQUIRE(ts::feasible(inst, bf.d));
        REQUIRE(ts::naive_total(bf.d) == bf.crossings);
        REQUIRE(bf.crossings == ts::reference_optimum(inst));
    }
}

TEST_CASE("exhaustive search respects its budget") {
    generator_params p;
    p.chars = 10;
    p.layers = 6;
    p.max_size = 1;
    p.max_interactions = 1;
    const auto inst = generate_instance(p, 3);
    CHECK_THROWS_AS(solve_bruteforce(inst, 10), budget_exceeded);
}

TEST_CASE("exact solver matches the reference optimum on every formulation") {
    for (std::uint64_t i = 0; i < 30; ++i) {
        const auto inst = ts::small_instance(i);
        const auto expected = ts::reference_optimum(inst);
        for (auto form : {formulation::lin, formulation::qdr, formulation::plo})
            for (bool sbc : {false, true}) {
                solve_options o;
                o.form = form;
                o.sbc = sbc;
                o.init = (i % 2) == 0;
                o.rnd = (i % 3) != 0;
                o.time_limit = 60;
                const auto r = solve_exact(inst, o);
                INFO("instance " << i << " " << to_string(form) << " sbc " << sbc);
                REQUIRE(r.report.status == solve_status::optimal);
                REQUIRE(r.report.best_crossings == expected);
                REQUIRE(ts::feasible(inst, r.d));
                REQUIRE(ts::naive_total(r.d) == expected);
            }
    }
}

TEST_CASE("one layer needs no crossings") {
    const auto inst = instance::build(1, named(4), {{0, {0, 2}}, {0, {1, 3}}});
    for (auto form : {formulation::lin, formulation::qdr, formulation::plo}) {
        solve_options o;
        o.form = form;
        const auto r = solve_exact(inst, o);
        CHECK(r.report.status == solve_status::optimal);
        CHECK(r.report.best_crossings == 0);
        CHECK(ts::feasible(inst, r.d));
    }
}

TEST_CASE("pinned layers are kept in the solution") {
    const auto inst = ts::small_instance(7);
    const auto perms = feasible_permutations(inst, 0);
    const auto &pin = perms.back();
    solve_options o;
    o.pinned = {{0, pin}};
    o.init = false;
    const auto r = solve_exact(inst, o);
    REQUIRE(r.report.status == solve_status::optimal);
    CHECK(r.d.layers[0] == pin);
    CHECK(r.report.best_crossings >= ts::reference_optimum(inst));
}

TEST_CASE("seed runs are all timed") {
    const auto inst = ts::small_instance(4);
    solve_options o;
    o.seeds = {3, 1, 2};
    const auto r = solve_exact(inst, o);
    CHECK(r.report.seed_times.size() == 3);
    CHECK(std::find(o.seeds.begin(), o.seeds.end(), r.report.seed) != o.seeds.end());
    CHECK(r.report.best_crossings == ts::reference_optimum(inst));
}

TEST_CASE("short time limits still return a valid drawing") {
    generator_params p;
    p.chars = 14;
    p.layers = 25;
    p.max_size = 4;
    p.max_interactions = 3;
    const auto inst = generate_instance(p, 17);
    solve_options o;
    o.time_limit = 0.05;
    o.form = formulation::lin;
    const auto r = solve_exact(inst, o);
    CHECK((r.report.status == solve_status::optimal || r.report.status == solve_status::feasible_timeout));
    REQUIRE(ts::feasible(inst, r.d));
    CHECK(r.report.best_crossings == ts::naive_total(r.d));
    CHECK(r.report.bound <= static_cast<double>(r.report.best_crossings) + 1e-9);
    CHECK_THROWS_AS(solve_exact(inst, solve_options{.time_limit = 0}), std::invalid_argument);
}

TEST_CASE("backend selection") {
    const auto names = backend_names();
    CHECK(std::find(names.begin(), names.end(), "highs") != names.end());
    CHECK(std::find(names.begin(), names.end(), "highs-linear") != names.end());
    CHECK_THROWS_AS(make_backend("no-such-backend"), backend_error);

    const auto inst = ts::small_instance(2);
    solve_options o;
    o.form = formulation::qdr;
    o.backend = "highs-linear";
    CHECK_THROWS_AS(solve_exact(inst, o), backend_error);
    o.backend = "no-such-backend";
    CHECK_THROWS_AS(solve_exact(inst, o), backend_error);
    o.form = formulation::lin;
    o.backend = "highs-linear";
    CHECK(solve_exact(inst, o).report.best_crossings == ts::reference_optimum(inst));

    auto b = make_backend("highs-linear");
    CHECK(!b->capabilities().quadratic_objective);
    b->add_binary(1);
    CHECK_THROWS_AS(b->add_quadratic(1, 0, 0), backend_error);
    CHECK_THROWS_AS(b->set_lazy_hook([](std::span<const double>) { return std::vector<lin_constraint>{}; }),
                    backend_error);
}

TEST_CASE("separation finds exactly the cyclic triple") {
    const auto inst = instance::build(1, named(3), {{0, {0}}, {0, {1}}, {0, {2}}});
    const auto m = build_model(inst, formulation::lin, false);
    std::vector<double> v(m.num_vars(), 0);
    // 0 above 1, 1 above 2, 2 above 0
    v[m.ordering_var(0, 0, 1)] = 1;
    v[m.ordering_var(0, 1, 2)] = 1;
    v[m.ordering_var(0, 0, 2)] = 0;
    CHECK(!is_transitive(m, v));
    const auto cuts = separate_lop(m, v, true);
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0] == m.lop_row(0, 0, 1, 2, 0));
    CHECK_THROWS_AS(decode_solution(m, v), invalid_drawing);

    // the reverse cycle violates the other row
    std::fill(v.begin(), v.end(), 0.0);
    v[m.ordering_var(0, 0, 2)] = 1;
    const auto back = separate_lop(m, v, true);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == m.lop_row(0, 0, 1, 2, 1));

    std::fill(v.begin(), v.end(), 0.5);
    CHECK(separate_lop(m, v, false).empty());
    CHECK(separate_lop(m, v, false, 1e-6, 0).empty());
}

TEST_CASE("decoding an encoded drawing gives it back") {
    ts::rng_t rng(41);
    for (int i = 0; i < 200; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 1, 8), ts::uniform(rng, 1, 6));
        const auto d = ts::random_drawing(inst, rng);
        for (auto form : {formulation::lin, formulation::plo}) {
            const auto m = build_model(inst, form, false);
            const auto v = m.encode(d);
            REQUIRE(is_transitive(m, v));
            REQUIRE(separate_lop(m, v, true, 1e-6, 50000, lop_scope::full).empty());
            REQUIRE(decode_solution(m, v) == d);
        }
    }
}

TEST_CASE("environment selects the default backend") {
    const char *old = std::getenv("STORYLINE_BACKEND");
    const std::string saved = old ? old : "";
    ::setenv("STORYLINE_BACKEND", "highs-linear", 1);
    CHECK(default_backend_name() == "highs-linear");
    ::unsetenv("STORYLINE_BACKEND");
    CHECK(default_backend_name() == "highs");
    if (old) ::setenv("STORYLINE_BACKEND", saved.c_str(), 1);
}
