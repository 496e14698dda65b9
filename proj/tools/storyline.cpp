// Command-line front end: solve, heuristic, check, render, bench, gen, convert.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "storyline/backend.hpp"
#include "storyline/bench.hpp"
#include "storyline/consistency.hpp"
#include "storyline/error.hpp"
#include "storyline/generate.hpp"
#include "storyline/heuristics.hpp"
#include "storyline/io.hpp"
#include "storyline/model.hpp"
#include "storyline/render.hpp"
#include "storyline/solver.hpp"

namespace sl = storyline;

namespace {

enum exit_code : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_timeout = 2,
    exit_invalid = 3,
    exit_parse = 4,
    exit_backend = 5,
    exit_infeasible = 6,
};

int status_exit(sl::solve_status s) {
    switch (s) {
        case sl::solve_status::optimal: return exit_ok;
        case sl::solve_status::feasible_timeout: return exit_timeout;
        case sl::solve_status::infeasible: return exit_infeasible;
        case sl::solve_status::error: return exit_backend;
    }
    return exit_backend;
}

bool on_off(const std::string &v) { return v == "on"; }

// Writes to `path`, or stdout for "-" and empty paths.
void emit(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        sl::write_file(path, text);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

struct solve_args {
    std::string instance, out, lp, lp_lop = "lazy";
    std::string formulation = "plo", sbc = "on", init = "on", rnd = "on";
    double time_limit = 3600;
    std::vector<std::uint64_t> seeds{0};
    std::string backend;
    bool timing = false;
};

int run_solve(const solve_args &a) {
    const auto inst = sl::parse_instance(a.instance);
    sl::solve_options o;
    o.form = sl::parse_formulation(a.formulation);
    o.sbc = on_off(a.sbc);
    o.init = on_off(a.init);
    o.rnd = on_off(a.rnd);
    o.time_limit = a.time_limit;
    o.seeds = a.seeds;
    o.backend = a.backend;
    if (!a.lp.empty()) {
        std::ostringstream os;
        const auto mode = a.lp_lop == "rows"   ? sl::lp_lop_rows::constraints
                          : a.lp_lop == "omit" ? sl::lp_lop_rows::omit
                                               : sl::lp_lop_rows::lazy;
        sl::write_lp(os, sl::build_model(inst, o.form, o.sbc), mode);
        sl::write_file(a.lp, os.str());
    }
    const auto res = sl::solve_exact(inst, o);
    const auto &r = res.report;
    std::cerr << "status " << sl::to_string(r.status) << ", crossings " << r.best_crossings
              << ", bound " << fmt(r.bound) << ", rounds " << r.separation_rounds << ", lop added "
              << r.lop_added << ", time " << fmt(r.wall_time) << " s (+" << fmt(r.heuristic_time)
              << " s heuristic)\n";
    if (r.best_crossings >= 0) emit(a.out, sl::solution_to_text(inst, res.d, r, a.timing));
    return status_exit(r.status);
}

struct heuristic_args {
    std::string instance, out, method = "slicing", from;
    int stride = 5, window = 30;
    double time_limit = 3600;
    std::string backend;
};

int run_heuristic(const heuristic_args &a) {
    const auto inst = sl::parse_instance(a.instance);
    sl::drawing d;
    sl::solve_report report;
    report.status = sl::solve_status::feasible_timeout;
    if (a.method == "greedy") {
        d = sl::greedy_baseline(inst);
    } else if (a.method == "improve") {
        d = a.from.empty() ? sl::greedy_baseline(inst) : sl::read_solution(a.from, inst).d;
        d = sl::improve(inst, d);
    } else {
        sl::solve_options o;
        o.time_limit = a.time_limit;
        o.backend = a.backend;
        const auto s = sl::initial_slicing(inst, {a.stride, a.window}, o);
        d = s.d;
        if (s.fallback) {
            std::cerr << "warning: " << s.message << "\n";
            report.message = s.message;
        }
    }
    report.best_crossings = sl::total_crossings(inst, d).total;
    std::cerr << a.method << ": " << report.best_crossings << " crossings\n";
    emit(a.out, sl::solution_to_text(inst, d, report));
    return exit_ok;
}

int run_check(const std::string &inst_path, const std::string &sol_path) {
    const auto inst = sl::parse_instance(inst_path);
    std::cout << "instance ok: " << inst.num_chars() << " characters, " << inst.num_layers()
              << " layers, " << inst.num_interactions() << " interactions\n";
    if (sol_path.empty()) return exit_ok;
    const auto sol = sl::read_solution(sol_path, inst);
    const auto cons = sl::check_consistency(inst, sol.d);
    std::cout << "solution ok: " << sol.crossings << " crossings, type-1 "
              << (cons.type1_consistent() ? "consistent" : "inconsistent") << ", type-2 "
              << (cons.type2_consistent() ? "consistent" : "inconsistent") << "\n";
    return exit_ok;
}

struct render_args {
    std::string instance, solution, out, style = "orthogonal";
    bool no_bars = false, no_labels = false;
    double column_width = 90, row_gap = 18;
};

int run_render(const render_args &a) {
    const auto inst = sl::parse_instance(a.instance);
    const auto d = a.solution.empty() ? sl::greedy_baseline(inst) : sl::read_solution(a.solution, inst).d;
    sl::render_spec spec;
    spec.style = sl::parse_curve_style(a.style);
    spec.interaction_bars = !a.no_bars;
    spec.labels = !a.no_labels;
    spec.column_width = a.column_width;
    spec.row_gap = a.row_gap;
    spec.run_width = std::min(spec.run_width, a.column_width / 3);
    emit(a.out, sl::render_svg(inst, d, spec));
    return exit_ok;
}

struct bench_args {
    std::string manifest, out, summary;
    int jobs = 1;
    bool no_timing = false;
};

int run_bench(const bench_args &a) {
    const auto m = sl::parse_manifest(a.manifest);
    const auto res = sl::run_bench(m, a.jobs);
    std::ostringstream csv;
    sl::write_bench_csv(csv, res.rows, !a.no_timing);
    emit(a.out, csv.str());
    if (!a.no_timing) {
        std::ostringstream sum;
        sl::write_bench_summary(sum, res);
        if (a.summary.empty())
            std::cerr << sum.str();
        else
            sl::write_file(a.summary, sum.str());
    }
    for (const auto &r : res.rows)
        if (!r.error.empty()) return exit_backend;
    return exit_ok;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Storyline crossing minimisation"};
    app.require_subcommand(1);

    solve_args sa;
    auto *solve = app.add_subcommand("solve", "Solve an instance exactly");
    solve->add_option("instance", sa.instance, "Instance file")->required()->check(CLI::ExistingFile);
    solve->add_option("--formulation", sa.formulation, "lin, qdr or plo")
        ->check(CLI::IsMember({"lin", "qdr", "plo"}, CLI::ignore_case));
    solve->add_option("--sbc", sa.sbc, "Symmetry-breaking rows")->check(CLI::IsMember({"on", "off"}));
    solve->add_option("--init", sa.init, "Initial heuristic")->check(CLI::IsMember({"on", "off"}));
    solve->add_option("--rnd", sa.rnd, "Rounding and local improvement")->check(CLI::IsMember({"on", "off"}));
    solve->add_option("--time-limit", sa.time_limit, "Seconds, heuristics excluded")->check(CLI::PositiveNumber);
    solve->add_option("--seed", sa.seeds, "Seed; several seeds report the median-time run");
    solve->add_option("--backend", sa.backend, "MILP backend (default: $STORYLINE_BACKEND or highs)");
    solve->add_option("--out", sa.out, "Solution file (default: stdout)");
    solve->add_option("--lp", sa.lp, "Also write the model in LP format");
    solve->add_option("--lp-lop", sa.lp_lop, "Ordering rows in the LP file: lazy section, plain rows, or omitted")
        ->check(CLI::IsMember({"lazy", "rows", "omit"}));
    solve->add_flag("--timing", sa.timing, "Include timings in the solution file");

    heuristic_args ha;
    auto *heur = app.add_subcommand("heuristic", "Run a heuristic");
    heur->add_option("instance", ha.instance, "Instance file")->required()->check(CLI::ExistingFile);
    heur->add_option("--method", ha.method, "slicing, greedy or improve")
        ->check(CLI::IsMember({"slicing", "greedy", "improve"}));
    heur->add_option("--from", ha.from, "Starting solution for improve")->check(CLI::ExistingFile);
    heur->add_option("--stride", ha.stride, "Layers kept per window")->check(CLI::PositiveNumber);
    heur->add_option("--window", ha.window, "Layers per window")->check(CLI::PositiveNumber);
    heur->add_option("--time-limit", ha.time_limit, "Seconds per window")->check(CLI::PositiveNumber);
    heur->add_option("--backend", ha.backend, "MILP backend");
    heur->add_option("--out", ha.out, "Solution file (default: stdout)");

    std::string check_inst, check_sol;
    auto *check = app.add_subcommand("check", "Validate an instance and optionally a solution");
    check->add_option("instance", check_inst, "Instance file")->required()->check(CLI::ExistingFile);
    check->add_option("solution", check_sol, "Solution file")->check(CLI::ExistingFile);

    render_args ra;
    auto *render = app.add_subcommand("render", "Draw a solution as SVG");
    render->add_option("instance", ra.instance, "Instance file")->required()->check(CLI::ExistingFile);
    render->add_option("solution", ra.solution, "Solution file (default: greedy drawing)")
        ->check(CLI::ExistingFile);
    render->add_option("--style", ra.style, "orthogonal or smooth")
        ->check(CLI::IsMember({"orthogonal", "smooth"}));
    render->add_option("--out", ra.out, "SVG file (default: stdout)");
    render->add_option("--column-width", ra.column_width, "Distance between layers")->check(CLI::PositiveNumber);
    render->add_option("--row-gap", ra.row_gap, "Distance between characters")->check(CLI::PositiveNumber);
    render->add_flag("--no-bars", ra.no_bars, "Omit interaction bars");
    render->add_flag("--no-labels", ra.no_labels, "Omit character names");

    bench_args ba;
    auto *bench = app.add_subcommand("bench", "Run a benchmark manifest");
    bench->add_option("--manifest", ba.manifest, "Manifest file")->required()->check(CLI::ExistingFile);
    bench->add_option("--out", ba.out, "CSV file (default: stdout)");
    bench->add_option("--summary", ba.summary, "Speedup summary CSV (default: stderr)");
    bench->add_option("--jobs", ba.jobs, "Parallel workers")->check(CLI::PositiveNumber);
    bench->add_flag("--no-timing", ba.no_timing, "Leave out timing columns for reproducible output");

    sl::generator_params gp;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    auto *gen = app.add_subcommand("gen", "Generate a random instance");
    gen->add_option("--n", gp.chars, "Characters")->check(CLI::PositiveNumber);
    gen->add_option("--layers", gp.layers, "Layers")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Seed");
    gen->add_option("--min-interactions", gp.min_interactions, "Interactions per layer, lower bound");
    gen->add_option("--max-interactions", gp.max_interactions, "Interactions per layer, upper bound");
    gen->add_option("--min-size", gp.min_size, "Interaction size, lower bound");
    gen->add_option("--max-size", gp.max_size, "Interaction size, upper bound");
    gen->add_option("--repeat", gp.repeat, "Probability of repeating the previous layer")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--out", gen_out, "Instance file (default: stdout)");

    std::string conv_in, conv_out;
    auto *convert = app.add_subcommand("convert", "Import a Stanford GraphBase book file");
    convert->add_option("book", conv_in, "Book file (.dat)")->required()->check(CLI::ExistingFile);
    convert->add_option("--out", conv_out, "Instance file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*solve) return run_solve(sa);
        if (*heur) return run_heuristic(ha);
        if (*check) return run_check(check_inst, check_sol);
        if (*render) return run_render(ra);
        if (*bench) return run_bench(ba);
        if (*gen) {
            emit(gen_out, sl::instance_to_text(sl::generate_instance(gp, gen_seed)));
            return exit_ok;
        }
        if (*convert) {
            emit(conv_out, sl::instance_to_text(sl::convert_sgb_book_file(conv_in)));
            return exit_ok;
        }
    } catch (const sl::parse_error &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const sl::invalid_instance &e) {
        std::cerr << "invalid instance: " << e.what() << "\n";
        return exit_invalid;
    } catch (const sl::invalid_drawing &e) {
        std::cerr << "invalid solution: " << e.what() << "\n";
        return exit_invalid;
    } catch (const sl::backend_error &e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return exit_backend;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
