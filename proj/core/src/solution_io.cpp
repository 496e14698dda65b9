#include <map>
#include <sstream>

#include "json_util.hpp"
#include "storyline/error.hpp"
#include "storyline/io.hpp"

namespace storyline {

using json = nlohmann::json;

namespace {

constexpr row_tag all_tags[] = {row_tag::tree,    row_tag::cr,     row_tag::lop,
                                row_tag::prop_r1, row_tag::prop_r2, row_tag::prop_i,
                                row_tag::sbc1,    row_tag::sbc2,   row_tag::fix};

solve_status parse_status(const std::string &s) {
    for (auto st : {solve_status::optimal, solve_status::feasible_timeout, solve_status::infeasible,
                    solve_status::error})
        if (to_string(st) == s) return st;
    throw parse_error("solution: unknown status \"" + s + "\"", 0, 0);
}

json report_json(const solve_report &r, bool timing) {
    json stats = json::object();
    stats["ordering_vars"] = r.stats.ordering_vars;
    stats["crossing_vars"] = r.stats.crossing_vars;
    stats["lop_rows"] = r.stats.lop_rows;
    stats["quadratic_terms"] = r.stats.quadratic_terms;
    json rows = json::object();
    for (auto tag : all_tags) rows[std::string(to_string(tag))] = r.stats.rows_of(tag);
    stats["rows"] = rows;

    json j = json::object();
    j["status"] = std::string(to_string(r.status));
    j["best_crossings"] = r.best_crossings;
    j["bound"] = r.bound;
    j["separation_rounds"] = r.separation_rounds;
    j["lop_added"] = r.lop_added;
    j["root_lp_rounds"] = r.root_lp_rounds;
    j["transitivity_fallbacks"] = r.transitivity_fallbacks;
    j["seed"] = r.seed;
    j["message"] = r.message;
    j["stats"] = stats;
    if (timing) {
        json log = json::array();
        for (const auto &p : r.phase_log)
            log.push_back({{"phase", p.phase},
                           {"seconds", p.seconds},
                           {"incumbent", p.incumbent},
                           {"bound", p.bound},
                           {"detail", p.detail}});
        j["timing"] = {{"wall_time", r.wall_time},
                       {"heuristic_time", r.heuristic_time},
                       {"seed_times", r.seed_times},
                       {"phase_log", log}};
    }
    return j;
}

template <class T>
T get_or(const json &j, const char *key, T fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception &) {
        throw parse_error(std::string("solution report: bad value for \"") + key + "\"", 0, 0);
    }
}

solve_report report_from_json(const json &j) {
    solve_report r;
    if (!j.is_object()) throw parse_error("solution: report must be an object", 0, 0);
    r.status = parse_status(get_or<std::string>(j, "status", "error"));
    r.best_crossings = get_or<std::int64_t>(j, "best_crossings", -1);
    r.bound = get_or<double>(j, "bound", 0);
    r.separation_rounds = get_or<int>(j, "separation_rounds", 0);
    r.lop_added = get_or<std::int64_t>(j, "lop_added", 0);
    r.root_lp_rounds = get_or<int>(j, "root_lp_rounds", 0);
    r.transitivity_fallbacks = get_or<int>(j, "transitivity_fallbacks", 0);
    r.seed = get_or<std::uint64_t>(j, "seed", 0);
    r.message = get_or<std::string>(j, "message", "");
    if (auto s = j.find("stats"); s != j.end() && s->is_object()) {
        r.stats.ordering_vars = get_or<int>(*s, "ordering_vars", 0);
        r.stats.crossing_vars = get_or<int>(*s, "crossing_vars", 0);
        r.stats.lop_rows = get_or<std::int64_t>(*s, "lop_rows", 0);
        r.stats.quadratic_terms = get_or<int>(*s, "quadratic_terms", 0);
        if (auto rows = s->find("rows"); rows != s->end() && rows->is_object())
            for (auto tag : all_tags)
                r.stats.rows[static_cast<std::size_t>(tag)] =
                    get_or<std::int64_t>(*rows, std::string(to_string(tag)).c_str(), 0);
    }
    if (auto t = j.find("timing"); t != j.end() && t->is_object()) {
        r.wall_time = get_or<double>(*t, "wall_time", 0);
        r.heuristic_time = get_or<double>(*t, "heuristic_time", 0);
        r.seed_times = get_or<std::vector<double>>(*t, "seed_times", {});
        if (auto log = t->find("phase_log"); log != t->end() && log->is_array())
            for (const auto &p : *log)
                r.phase_log.push_back({get_or<std::string>(p, "phase", ""),
                                       get_or<double>(p, "seconds", 0),
                                       get_or<std::int64_t>(p, "incumbent", -1),
                                       get_or<double>(p, "bound", 0),
                                       get_or<std::string>(p, "detail", "")});
    }
    return r;
}

}  // namespace

std::string solution_to_text(const instance &inst, const drawing &d, const solve_report &report,
                             bool include_timing) {
    const auto count = total_crossings(inst, d);
    std::ostringstream os;
    os << "{\n  \"format\": \"storyline-solution\",\n  \"version\": 1,\n";
    os << "  \"crossings\": " << count.total << ",\n  \"layers\": [\n";
    for (std::size_t t = 0; t < d.layers.size(); ++t) {
        os << "    [";
        for (std::size_t i = 0; i < d.layers[t].size(); ++i)
            os << (i ? ", " : "") << inst.character_info(d.layers[t][i]).label;
        os << "]" << (t + 1 < d.layers.size() ? "," : "") << "\n";
    }
    os << "  ],\n  \"report\": " << report_json(report, include_timing).dump() << "\n}\n";
    return os.str();
}

void write_solution(const std::filesystem::path &path, const instance &inst, const drawing &d,
                    const solve_report &report, bool include_timing) {
    write_file(path, solution_to_text(inst, d, report, include_timing));
}

solution_file parse_solution_text(std::string_view text, const instance &inst) {
    const json doc = detail::parse_json(text);
    if (!doc.is_object()) throw parse_error("solution: top level must be an object", 0, 0);
    if (auto f = doc.find("format"); f != doc.end() && *f != "storyline-solution")
        throw parse_error("solution: unknown format " + f->dump(), 0, 0);
    auto layers = doc.find("layers");
    if (layers == doc.end() || !layers->is_array())
        throw parse_error("solution: \"layers\" must be an array", 0, 0);

    std::map<std::int64_t, char_id> by_label;
    for (char_id c = 0; c < inst.num_chars(); ++c) by_label[inst.character_info(c).label] = c;

    solution_file out;
    for (const auto &jl : *layers) {
        if (!jl.is_array()) throw parse_error("solution: every layer must be an array", 0, 0);
        permutation pi;
        for (const auto &v : jl) {
            if (!v.is_number_integer()) throw parse_error("solution: character ids must be integers", 0, 0);
            auto it = by_label.find(v.get<std::int64_t>());
            if (it == by_label.end())
                throw invalid_drawing("solution references unknown character " + v.dump());
            pi.push_back(it->second);
        }
        out.d.layers.push_back(std::move(pi));
    }
    out.crossings = total_crossings(inst, out.d).total;  // validates
    if (auto c = doc.find("crossings"); c != doc.end()) {
        if (!c->is_number_integer() || c->get<std::int64_t>() != out.crossings)
            throw invalid_drawing("solution records " + c->dump() + " crossings, recount gives " +
                                  std::to_string(out.crossings));
    }
    if (auto r = doc.find("report"); r != doc.end()) out.report = report_from_json(*r);
    return out;
}

solution_file read_solution(const std::filesystem::path &path, const instance &inst) {
    return parse_solution_text(read_file(path), inst);
}

}  // namespace storyline
