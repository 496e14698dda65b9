#ifndef STORYLINE_SOLVER_HPP
#define STORYLINE_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "storyline/drawing.hpp"
#include "storyline/instance.hpp"
#include "storyline/model.hpp"

namespace storyline {

/// Window length and stride of the sliced initial heuristic.
struct slice_config {
    int stride = 5;
    int window = 30;
};

struct solve_options {
    formulation form = formulation::plo;
    bool sbc = true;
    bool init = true;  ///< start from the initial heuristic
    bool rnd = true;   ///< root LP rounds with rounding + local improvement
    double time_limit = 3600;
    std::vector<std::uint64_t> seeds{0};
    std::string backend;  ///< empty: default_backend_name()

    double tolerance = 1e-6;
    std::size_t batch_cap = 50000;
    int root_rounds = 20;
    slice_config slicing;

    /// Layers whose order is fixed in the model (used by the slicing heuristic).
    std::vector<std::pair<int, permutation>> pinned;
};

enum class solve_status { optimal, feasible_timeout, infeasible, error };

std::string_view to_string(solve_status s);

struct phase_entry {
    std::string phase;  ///< "init", "root-lp", "mip", "decode", ...
    double seconds = 0;
    std::int64_t incumbent = -1;
    double bound = 0;
    std::string detail;
};

struct solve_report {
    solve_status status = solve_status::error;
    std::int64_t best_crossings = -1;  ///< -1 when no drawing was found
    double bound = 0;                  ///< lower bound on the optimum
    int separation_rounds = 0;
    std::int64_t lop_added = 0;
    int root_lp_rounds = 0;
    int transitivity_fallbacks = 0;  ///< PLO solutions that needed full LOP rows
    double wall_time = 0;            ///< solve time, heuristic time excluded
    double heuristic_time = 0;
    std::uint64_t seed = 0;
    std::vector<double> seed_times;  ///< wall time of every seed run, in seed order
    model_stats stats;
    std::vector<phase_entry> phase_log;
    std::string message;
};

struct solve_result {
    drawing d;
    solve_report report;
};

/// Exact crossing minimisation. LOP rows are separated lazily on every
/// integer solution. With several seeds, the run with median wall time is
/// returned. Throws backend_error for unknown backends and capability
/// mismatches; other backend failures come back as status error.
solve_result solve_exact(const instance &inst, const solve_options &opts = {});

struct bruteforce_result {
    drawing d;
    std::int64_t crossings = 0;
};

inline constexpr std::int64_t default_bruteforce_budget = 100'000'000;

/// Permutations of AC(layer) with every interaction consecutive, in
/// lexicographic order.
std::vector<permutation> feasible_permutations(const instance &inst, int layer);

/// Number of feasible permutations of `layer` without enumerating them
/// (saturates at INT64_MAX).
std::int64_t count_feasible_permutations(const instance &inst, int layer);

/// Layered dynamic program over feasible permutations. Throws
/// budget_exceeded when the number of layer-to-layer transitions exceeds
/// `budget`.
bruteforce_result solve_bruteforce(const instance &inst,
                                   std::int64_t budget = default_bruteforce_budget);

enum class lop_scope {
    kept,  ///< triples the model's LOP family keeps (reduced on PLO layers)
    full,  ///< every triple of active characters
};

/// LOP rows violated by more than `tolerance` under `values`, at most
/// `cap` of them, in layer/triple order. For integral values these are the
/// 3-cycles of the layer tournaments.
std::vector<lin_constraint> separate_lop(const ilp_model &model, std::span<const double> values,
                                         bool integral, double tolerance = 1e-6,
                                         std::size_t cap = 50000, lop_scope scope = lop_scope::kept);

/// True when every layer's ordering variables (rounded) form a total order.
bool is_transitive(const ilp_model &model, std::span<const double> values);

/// Reads each layer's order from the ordering variables: characters by
/// descending out-degree. Throws invalid_drawing for intransitive values.
drawing decode_solution(const ilp_model &model, std::span<const double> values);

}  // namespace storyline

#endif  // STORYLINE_SOLVER_HPP
