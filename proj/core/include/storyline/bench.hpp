#ifndef STORYLINE_BENCH_HPP
#define STORYLINE_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "storyline/model.hpp"
#include "storyline/solver.hpp"

namespace storyline {

struct bench_config {
    std::string name;
    formulation form = formulation::plo;
    bool sbc = true;
    bool init = true;
    bool rnd = true;
};

struct bench_manifest {
    std::vector<std::filesystem::path> instances;
    std::vector<bench_config> configs;
    std::vector<std::uint64_t> seeds{0};
    double time_limit = 60;
    std::string backend;
};

/// Reads a JSON manifest; relative instance paths are resolved against the
/// manifest's directory.
bench_manifest parse_manifest(const std::filesystem::path &path);
bench_manifest parse_manifest_text(std::string_view text, const std::filesystem::path &base = {});

struct bench_row {
    std::string instance;
    std::string config;
    formulation form = formulation::plo;
    bool sbc = false, init = false, rnd = false;
    std::uint64_t seed = 0;
    solve_status status = solve_status::error;
    std::int64_t crossings = -1;
    double bound = 0;
    double seconds = 0;
    int separation_rounds = 0;
    std::int64_t lop_added = 0;
    int root_lp_rounds = 0;
    std::int64_t lop_rows = 0;
    bool median = false;  ///< the median-time seed of its (instance, config)
    std::string error;
};

struct speedup {
    std::string baseline;
    std::string config;
    double geometric_mean = 0;  ///< of baseline time / config time
    int common = 0;             ///< instances solved optimally by both
};

struct bench_result {
    std::vector<bench_row> rows;  ///< instance-major, then config, then seed
    std::vector<speedup> speedups;
};

/// Runs every (instance, config, seed) with `jobs` worker threads. Missing
/// or invalid instances produce rows with status error.
bench_result run_bench(const bench_manifest &manifest, int jobs = 1);

/// Geometric-mean speedups between every ordered pair of configurations,
/// over instances whose median runs are optimal for both.
std::vector<speedup> speedup_summary(const std::vector<bench_row> &rows,
                                     const std::vector<bench_config> &configs);

/// CSV with a header row. Without timing, the time and median columns are
/// left out so that output depends only on inputs and seeds.
void write_bench_csv(std::ostream &os, const std::vector<bench_row> &rows, bool timing = true);
void write_bench_summary(std::ostream &os, const bench_result &result);

}  // namespace storyline

#endif  // STORYLINE_BENCH_HPP
