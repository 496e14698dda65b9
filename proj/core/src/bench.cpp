#include "storyline/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "json_util.hpp"
#include "storyline/error.hpp"
#include "storyline/io.hpp"

namespace storyline {

using json = nlohmann::json;

namespace {

std::string fmt(double v, const char *f = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

bench_manifest parse_manifest_text(std::string_view text, const std::filesystem::path &base) {
    const json doc = detail::parse_json(text);
    if (!doc.is_object()) throw parse_error("manifest: top level must be an object", 0, 0);
    bench_manifest m;
    try {
        for (const auto &p : doc.value("instances", json::array())) {
            std::filesystem::path path = p.get<std::string>();
            m.instances.push_back(path.is_relative() && !base.empty() ? base / path : path);
        }
        for (const auto &c : doc.value("configs", json::array())) {
            bench_config cfg;
            cfg.form = parse_formulation(c.value("formulation", std::string("plo")));
            cfg.sbc = c.value("sbc", true);
            cfg.init = c.value("init", true);
            cfg.rnd = c.value("rnd", true);
            cfg.name = c.value("name", std::string(to_string(cfg.form)) + (cfg.sbc ? "+SBC" : ""));
            m.configs.push_back(std::move(cfg));
        }
        if (doc.contains("seeds")) m.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
        m.time_limit = doc.value("time_limit", m.time_limit);
        m.backend = doc.value("backend", std::string());
    } catch (const json::exception &e) {
        throw parse_error(std::string("manifest: ") + e.what(), 0, 0);
    } catch (const std::invalid_argument &e) {
        throw parse_error(std::string("manifest: ") + e.what(), 0, 0);
    }
    if (m.seeds.empty()) m.seeds = {0};
    if (!(m.time_limit > 0)) throw parse_error("manifest: time_limit must be positive", 0, 0);
    return m;
}

bench_manifest parse_manifest(const std::filesystem::path &path) {
    return parse_manifest_text(read_file(path), path.parent_path());
}

bench_result run_bench(const bench_manifest &m, int jobs) {
    struct task {
        std::size_t inst, cfg, seed;
    };
    std::vector<task> tasks;
    for (std::size_t i = 0; i < m.instances.size(); ++i)
        for (std::size_t c = 0; c < m.configs.size(); ++c)
            for (std::size_t s = 0; s < m.seeds.size(); ++s) tasks.push_back({i, c, s});

    // Instances are parsed once, up front; failures are reported per row.
    std::vector<std::optional<instance>> loaded(m.instances.size());
    std::vector<std::string> load_error(m.instances.size());
    for (std::size_t i = 0; i < m.instances.size(); ++i) {
        try {
            loaded[i] = parse_instance(m.instances[i]);
        } catch (const std::exception &e) {
            load_error[i] = e.what();
        }
    }

    bench_result result;
    result.rows.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < tasks.size();) {
            const auto &t = tasks[k];
            const auto &cfg = m.configs[t.cfg];
            bench_row row;
            row.instance = m.instances[t.inst].stem().string();
            row.config = cfg.name;
            row.form = cfg.form;
            row.sbc = cfg.sbc;
            row.init = cfg.init;
            row.rnd = cfg.rnd;
            row.seed = m.seeds[t.seed];
            if (!loaded[t.inst]) {
                row.error = load_error[t.inst];
            } else {
                solve_options o;
                o.form = cfg.form;
                o.sbc = cfg.sbc;
                o.init = cfg.init;
                o.rnd = cfg.rnd;
                o.time_limit = m.time_limit;
                o.seeds = {row.seed};
                o.backend = m.backend;
                try {
                    const auto r = solve_exact(*loaded[t.inst], o);
                    row.status = r.report.status;
                    row.crossings = r.report.best_crossings;
                    row.bound = r.report.bound;
                    row.seconds = r.report.wall_time;
                    row.separation_rounds = r.report.separation_rounds;
                    row.lop_added = r.report.lop_added;
                    row.root_lp_rounds = r.report.root_lp_rounds;
                    row.lop_rows = r.report.stats.lop_rows;
                } catch (const std::exception &e) {
                    row.error = e.what();
                }
            }
            result.rows[k] = std::move(row);
        }
    };
    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto &th : pool) th.join();

    // Median-time seed per (instance, config); ties go to the earlier seed.
    const std::size_t ns = m.seeds.size();
    for (std::size_t g = 0; g + ns <= result.rows.size(); g += ns) {
        std::vector<std::size_t> idx(ns);
        for (std::size_t s = 0; s < ns; ++s) idx[s] = g + s;
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return result.rows[a].seconds < result.rows[b].seconds;
        });
        result.rows[idx[(ns - 1) / 2]].median = true;
    }
    result.speedups = speedup_summary(result.rows, m.configs);
    return result;
}

std::vector<speedup> speedup_summary(const std::vector<bench_row> &rows,
                                     const std::vector<bench_config> &configs) {
    // instance -> config -> median time of an optimal run
    std::map<std::string, std::map<std::string, double>> solved;
    for (const auto &r : rows)
        if (r.median && r.status == solve_status::optimal) solved[r.instance][r.config] = r.seconds;

    std::vector<speedup> out;
    constexpr double floor_seconds = 1e-3;  // keeps ratios finite for instant solves
    for (const auto &base : configs)
        for (const auto &cfg : configs) {
            if (base.name == cfg.name) continue;
            speedup s{base.name, cfg.name, 0, 0};
            double log_sum = 0;
            for (const auto &[inst, times] : solved) {
                auto a = times.find(base.name), b = times.find(cfg.name);
                if (a == times.end() || b == times.end()) continue;
                log_sum += std::log(std::max(a->second, floor_seconds)) -
                           std::log(std::max(b->second, floor_seconds));
                ++s.common;
            }
            s.geometric_mean = s.common ? std::exp(log_sum / s.common) : 0;
            out.push_back(std::move(s));
        }
    return out;
}

void write_bench_csv(std::ostream &os, const std::vector<bench_row> &rows, bool timing) {
    os << "instance,config,formulation,sbc,init,rnd,seed,status,crossings,bound,"
       << (timing ? "seconds," : "") << "separation_rounds,lop_added,root_lp_rounds,lop_rows"
       << (timing ? ",median" : "") << ",error\n";
    for (const auto &r : rows) {
        os << csv_field(r.instance) << ',' << csv_field(r.config) << ',' << to_string(r.form) << ','
           << r.sbc << ',' << r.init << ',' << r.rnd << ',' << r.seed << ','
           << (r.error.empty() ? to_string(r.status) : "error") << ',' << r.crossings << ','
           << fmt(r.bound) << ',';
        if (timing) os << fmt(r.seconds, "%.4f") << ',';
        os << r.separation_rounds << ',' << r.lop_added << ',' << r.root_lp_rounds << ','
           << r.lop_rows;
        if (timing) os << ',' << r.median;
        os << ',' << csv_field(r.error) << '\n';
    }
}

void write_bench_summary(std::ostream &os, const bench_result &result) {
    os << "baseline,config,speedup_geomean,common_instances\n";
    for (const auto &s : result.speedups)
        os << csv_field(s.baseline) << ',' << csv_field(s.config) << ',' << fmt(s.geometric_mean, "%.4f")
           << ',' << s.common << '\n';
}

}  // namespace storyline
