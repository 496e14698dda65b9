#ifndef STORYLINE_BACKEND_HPP
#define STORYLINE_BACKEND_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "storyline/model.hpp"

namespace storyline {

struct backend_capabilities {
    bool linear_objective = true;
    bool quadratic_objective = false;
    bool incremental_add = false;  ///< rows may be added between solves
    bool callback_lazy = false;    ///< rows may be injected from inside the search
};

struct backend_limits {
    double time_limit = 3600;  ///< seconds, per solve call
    std::int64_t node_limit = -1;
    std::uint64_t seed = 0;
};

enum class backend_status { optimal, time_limit, infeasible, error };

struct backend_result {
    backend_status status = backend_status::error;
    bool has_solution = false;
    std::vector<double> values;  ///< one per column, when has_solution
    double objective = 0;
    double bound = 0;  ///< dual bound (LP value for relaxations)
    std::int64_t nodes = 0;
    std::string message;
};

/// Called on every integer solution found during search. Returned rows are
/// added as lazy cuts; an empty result accepts the solution.
using lazy_hook = std::function<std::vector<lin_constraint>(std::span<const double>)>;

/// Narrow MILP interface: binary columns, linear rows, a linear (optionally
/// quadratic) objective, limits, and solve. Columns and rows are only ever
/// appended.
class milp_backend {
   public:
    virtual ~milp_backend() = default;

    virtual std::string name() const = 0;
    virtual backend_capabilities capabilities() const = 0;

    /// Adds a binary column with objective coefficient `cost`; returns its index.
    virtual int add_binary(double cost) = 0;
    virtual void add_objective_offset(double c) = 0;
    /// Adds coef * x_a * x_b to the objective. Throws backend_error unless
    /// the quadratic-objective capability is present.
    virtual void add_quadratic(double coef, int a, int b) = 0;
    virtual void add_row(const lin_constraint &row) = 0;

    virtual void set_limits(const backend_limits &limits) = 0;
    /// Feasible start for the next solve; ignored when infeasible.
    virtual void set_start(std::span<const double> values) = 0;
    /// Throws backend_error unless the callback-lazy capability is present.
    virtual void set_lazy_hook(lazy_hook hook) = 0;

    /// Solves the integer program, or its LP relaxation when `relax` is set.
    virtual backend_result solve(bool relax = false) = 0;

    virtual int num_cols() const = 0;
    virtual std::int64_t num_rows() const = 0;
};

/// Known backends: "highs" (products of binaries linearised, so quadratic
/// objectives are accepted) and "highs-linear" (linear objectives only).
std::vector<std::string> backend_names();

/// Name from STORYLINE_BACKEND, else "highs".
std::string default_backend_name();

/// Throws backend_error for unknown names.
std::unique_ptr<milp_backend> make_backend(std::string_view name);

/// Loads the model's columns, objective and materialised rows into `b`.
/// LOP rows are left out. Throws backend_error on a capability mismatch.
void load_model(milp_backend &b, const ilp_model &m);

}  // namespace storyline

#endif  // STORYLINE_BACKEND_HPP
