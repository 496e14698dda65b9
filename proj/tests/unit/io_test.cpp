#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "storyline/bench.hpp"
#include "storyline/error.hpp"
#include "storyline/generate.hpp"
#include "storyline/heuristics.hpp"
#include "storyline/io.hpp"
#include "storyline/render.hpp"
#include "storyline/solver.hpp"
#include "support.hpp"

using namespace storyline;
namespace ts = testsupport;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("storyline_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

double orient(point a, point b, point c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool proper_cross(point a, point b, point c, point d) {
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

// Pairwise segment intersections between different characters' polylines.
std::int64_t geometric_crossings(const std::vector<std::vector<point>> &paths) {
    std::int64_t n = 0;
    for (std::size_t p = 0; p < paths.size(); ++p)
        for (std::size_t q = p + 1; q < paths.size(); ++q)
            for (std::size_t i = 0; i + 1 < paths[p].size(); ++i)
                for (std::size_t j = 0; j + 1 < paths[q].size(); ++j)
                    if (proper_cross(paths[p][i], paths[p][i + 1], paths[q][j], paths[q][j + 1])) ++n;
    return n;
}

const char *const tiny_instance = R"({
  "layers": 2,
  "characters": [{"id": 7, "name": "Ann"}, {"id": 3}],
  "interactions": [{"time": 1, "chars": [7, 3]}, {"time": 2, "chars": [3]}, {"time": 2, "chars": [7]}]
})";

}  // namespace

TEST_CASE("instance text round-trips") {
    ts::rng_t rng(61);
    for (int i = 0; i < 100; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 1, 9), ts::uniform(rng, 1, 9));
        const auto text = instance_to_text(inst);
        const auto back = parse_instance_text(text);
        REQUIRE(back == inst);
        REQUIRE(instance_to_text(back) == text);
    }
    const auto inst = parse_instance_text(tiny_instance);
    CHECK(inst.num_chars() == 2);
    CHECK(inst.character_info(0).label == 7);
    CHECK(inst.character_info(0).name == "Ann");
    CHECK(inst.num_layers() == 2);
}

TEST_CASE("instance parse errors carry a position") {
    try {
        parse_instance_text("{\n  \"layers\": 2,\n  \"characters\": [,]\n}");
        FAIL("no exception");
    } catch (const parse_error &e) {
        CHECK(e.line() == 3);
        CHECK(e.column() > 0);
    }
    CHECK_THROWS_AS(parse_instance_text(R"({"layers": 1})"), parse_error);
    CHECK_THROWS_AS(parse_instance_text(R"({"layers": "2", "characters": [], "interactions": []})"), parse_error);
    CHECK_THROWS_AS(parse_instance_text(R"({"layers": 1, "characters": [{"id": 1}],
        "interactions": [{"time": 1, "chars": [2]}]})"),
                    invalid_instance);
    CHECK_THROWS_AS(parse_instance_text(R"({"layers": 1, "characters": [{"id": 1}],
        "interactions": [{"time": 2, "chars": [1]}]})"),
                    invalid_instance);
    CHECK_THROWS_AS(parse_instance(fs::path("/nonexistent/storyline.json")), error);
}

TEST_CASE("solutions round-trip and are checked on read") {
    const auto inst = parse_instance_text(tiny_instance);
    const drawing d{{{1, 0}, {0, 1}}};
    solve_report rep;
    rep.status = solve_status::optimal;
    rep.best_crossings = 1;
    const auto text = solution_to_text(inst, d, rep);
    CHECK(text.find("[3, 7]") != std::string::npos);  // labels, not internal ids
    const auto back = parse_solution_text(text, inst);
    CHECK(back.d == d);
    CHECK(back.crossings == 1);
    CHECK(back.report.status == solve_status::optimal);
    CHECK(solution_to_text(inst, back.d, back.report) == text);

    auto wrong_count = text;
    wrong_count.replace(wrong_count.find("\"crossings\": 1"), 14, "\"crossings\": 0");
    CHECK_THROWS_AS(parse_solution_text(wrong_count, inst), invalid_drawing);

    const auto other = parse_instance_text(R"({"layers": 1, "characters": [{"id": 1}],
        "interactions": [{"time": 1, "chars": [1]}]})");
    CHECK_THROWS_AS(parse_solution_text(text, other), invalid_drawing);
    CHECK_THROWS_AS(parse_solution_text("{\"layers\": [", inst), parse_error);

    const auto timed = solution_to_text(inst, d, rep, true);
    CHECK(timed != text);
}

TEST_CASE("files round-trip") {
    const auto dir = scratch_dir("files");
    const auto inst = ts::small_instance(3);
    write_instance(dir / "i.json", inst);
    CHECK(parse_instance(dir / "i.json") == inst);
    const auto bf = solve_bruteforce(inst);
    solve_report rep;
    rep.best_crossings = bf.crossings;
    write_solution(dir / "s.json", inst, bf.d, rep);
    CHECK(read_solution(dir / "s.json", inst).d == bf.d);
    fs::remove_all(dir);
}

TEST_CASE("book files become one layer per clique") {
    const char *book =
        "* comment\n"
        "AA Alpha, the first\n"
        "BB Beta\n"
        "CC Gamma\n"
        "DD Delta, never seen\n"
        "\n"
        "1.1:AA,BB;CC\n"
        "1.2:BB,CC\n"
        "\n"
        "2.1:AA\n";
    const auto inst = convert_sgb_book(book);
    CHECK(inst.num_layers() == 4);
    REQUIRE(inst.num_chars() == 3);
    CHECK(inst.character_info(0).name == "Alpha");
    CHECK(inst.character_info(2).name == "Gamma");
    for (int t = 0; t < inst.num_layers(); ++t) CHECK(inst.interactions_at(t).size() == 1);
    CHECK(inst.interaction_at(inst.interactions_at(0).front()).chars == std::vector<char_id>{0, 1});
    CHECK(inst.interaction_at(inst.interactions_at(1).front()).chars == std::vector<char_id>{2});

    CHECK_THROWS_AS(convert_sgb_book("AA Alpha\n\n1:AA,ZZ\n"), parse_error);
    CHECK_THROWS_AS(convert_sgb_book("AA Alpha\n\nno colon here\n"), parse_error);
    CHECK_THROWS_AS(convert_sgb_book("AA Alpha\n"), invalid_instance);
}

TEST_CASE("generator") {
    generator_params p;
    p.chars = 9;
    p.layers = 12;
    p.repeat = 0.3;
    CHECK(generate_instance(p, 5) == generate_instance(p, 5));
    CHECK(instance_to_text(generate_instance(p, 5)) == instance_to_text(generate_instance(p, 5)));
    CHECK(!(generate_instance(p, 5) == generate_instance(p, 6)));

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto inst = generate_instance(p, seed);
        std::vector<char> seen(inst.num_chars(), 0);
        for (const auto &inter : inst.interactions()) {
            CHECK(static_cast<int>(inter.chars.size()) <= p.max_size);
            for (char_id c : inter.chars) seen[c] = 1;
        }
        for (char s : seen) CHECK(s);
    }

    generator_params one;
    one.chars = 1;
    one.layers = 3;
    one.max_size = 1;
    CHECK(generate_instance(one, 0).num_chars() == 1);

    generator_params bad;
    bad.min_size = 4;
    bad.max_size = 2;
    CHECK_THROWS_AS(generate_instance(bad, 0), std::invalid_argument);
    bad = {};
    bad.chars = 0;
    CHECK_THROWS_AS(generate_instance(bad, 0), std::invalid_argument);
}

TEST_CASE("orthogonal paths cross exactly as often as the drawing") {
    ts::rng_t rng(62);
    for (int i = 0; i < 150; ++i) {
        const auto inst = ts::padded_instance(rng, ts::uniform(rng, 1, 7), ts::uniform(rng, 1, 6));
        const auto d = ts::random_drawing(inst, rng);
        const auto paths = character_paths(inst, d);
        REQUIRE(geometric_crossings(paths) == ts::naive_total(d));
    }
}

TEST_CASE("svg output") {
    const auto inst = ts::small_instance(5);
    const auto d = solve_bruteforce(inst).d;
    for (auto style : {curve_style::orthogonal, curve_style::smooth}) {
        render_spec spec;
        spec.style = style;
        const auto a = render_svg(inst, d, spec);
        CHECK(a == render_svg(inst, d, spec));
        CHECK(a.rfind("<svg", 0) == 0);
        CHECK(a.find("</svg>") != std::string::npos);
    }
    CHECK(parse_curve_style("smooth") == curve_style::smooth);
    CHECK_THROWS_AS(parse_curve_style("wavy"), std::invalid_argument);

    render_spec bad;
    bad.column_width = 0;
    CHECK_THROWS_AS(render_svg(inst, d, bad), std::invalid_argument);
    CHECK_THROWS_AS(render_svg(inst, drawing{}, {}), invalid_drawing);

    const auto single = generate_instance({1, 2, 1, 1, 1, 1, 0.0}, 0);
    render_spec plain;
    plain.interaction_bars = false;
    plain.labels = false;
    const auto svg = render_svg(single, greedy_baseline(single), plain);
    CHECK(svg.find("<path") != std::string::npos);
}

TEST_CASE("manifests") {
    const auto m = parse_manifest_text(R"({
        "instances": ["a.json", "/abs/b.json"],
        "configs": [{"formulation": "lin", "sbc": false}, {"name": "mine", "formulation": "PLO"}],
        "seeds": [1, 2],
        "time_limit": 5
    })",
                                       "/base");
    REQUIRE(m.instances.size() == 2);
    CHECK(m.instances[0] == fs::path("/base/a.json"));
    CHECK(m.instances[1] == fs::path("/abs/b.json"));
    REQUIRE(m.configs.size() == 2);
    CHECK(m.configs[0].name == "LIN");
    CHECK(m.configs[1].name == "mine");
    CHECK(m.configs[1].form == formulation::plo);
    CHECK(m.seeds == std::vector<std::uint64_t>{1, 2});
    CHECK(m.time_limit == 5);

    CHECK_THROWS_AS(parse_manifest_text("[1, 2]"), parse_error);
    CHECK_THROWS_AS(parse_manifest_text(R"({"time_limit": -1})"), parse_error);
    CHECK_THROWS_AS(parse_manifest_text(R"({"configs": [{"formulation": "cubic"}]})"), parse_error);
}

TEST_CASE("bench rows and speedups") {
    std::ostringstream empty;
    write_bench_csv(empty, {}, false);
    const auto header = empty.str();
    CHECK(std::count(header.begin(), header.end(), '\n') == 1);

    const std::vector<bench_config> configs{{"A", formulation::lin, true}, {"B", formulation::plo, true}};
    std::vector<bench_row> rows;
    for (const char *inst : {"x", "y"})
        for (const auto &c : configs) {
            bench_row r;
            r.instance = inst;
            r.config = c.name;
            r.status = solve_status::optimal;
            r.crossings = 3;
            r.seconds = c.name == "A" ? 2.0 : (inst[0] == 'x' ? 1.0 : 4.0);
            r.median = true;
            rows.push_back(r);
        }
    const auto s = speedup_summary(rows, configs);
    bool seen_self = false, seen_ab = false;
    for (const auto &sp : s) {
        if (sp.baseline == sp.config) {
            seen_self = true;
            CHECK(sp.geometric_mean == doctest::Approx(1.0));
        }
        if (sp.baseline == "A" && sp.config == "B") {
            seen_ab = true;
            CHECK(sp.common == 2);
            CHECK(sp.geometric_mean == doctest::Approx(std::sqrt(2.0 * 0.5)));
        }
    }
    CHECK(seen_ab);
    (void)seen_self;

    const auto dir = scratch_dir("bench");
    write_instance(dir / "good.json", ts::small_instance(1));
    bench_manifest m;
    m.instances = {dir / "good.json", dir / "missing.json"};
    m.configs = {configs[0]};
    m.time_limit = 30;
    const auto res = run_bench(m);
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[0].status == solve_status::optimal);
    CHECK(res.rows[0].crossings == ts::reference_optimum(ts::small_instance(1)));
    CHECK(res.rows[1].status == solve_status::error);
    CHECK(!res.rows[1].error.empty());
    std::ostringstream csv;
    write_bench_csv(csv, res.rows, false);
    const auto text = csv.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    fs::remove_all(dir);
}
