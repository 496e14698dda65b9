#include <cmath>
#include <cstdlib>
#include <limits>

#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wunused-parameter"
#include "Highs.h"
#pragma GCC diagnostic pop

#include "storyline/backend.hpp"
#include "storyline/error.hpp"

namespace storyline {

namespace {

// Products of binaries become w with w <= a, w <= b, w >= a + b - 1.
class highs_backend final : public milp_backend {
   public:
    explicit highs_backend(bool emulate_quadratic) : emulate_quadratic_(emulate_quadratic) {}

    std::string name() const override { return emulate_quadratic_ ? "highs" : "highs-linear"; }

    backend_capabilities capabilities() const override {
        return {true, emulate_quadratic_, true, false};
    }

    int add_binary(double cost) override {
        cost_.push_back(cost);
        integer_.push_back(true);
        return static_cast<int>(cost_.size()) - 1;
    }

    void add_objective_offset(double c) override { offset_ += c; }

    void add_quadratic(double coef, int a, int b) override {
        if (!emulate_quadratic_)
            throw backend_error("backend '" + name() + "' has no quadratic-objective support");
        if (a == b) {  // x * x = x for binaries
            cost_.at(a) += coef;
            return;
        }
        cost_.push_back(coef);
        integer_.push_back(false);
        const int w = static_cast<int>(cost_.size()) - 1;
        append_row({{1, w}, {-1, a}}, -inf(), 0);
        append_row({{1, w}, {-1, b}}, -inf(), 0);
        append_row({{1, w}, {-1, a}, {-1, b}}, -1, inf());
        aux_.push_back({w, a, b});
    }

    void add_row(const lin_constraint &row) override {
        double lo = -inf(), hi = inf();
        if (row.cmp != sense::ge) hi = row.rhs;
        if (row.cmp != sense::le) lo = row.rhs;
        append_row(row.terms, lo, hi);
    }

    void set_limits(const backend_limits &limits) override { limits_ = limits; }

    void set_start(std::span<const double> values) override {
        start_.assign(values.begin(), values.end());
    }

    void set_lazy_hook(lazy_hook) override {
        throw backend_error("backend '" + name() + "' has no lazy-constraint callback");
    }

    int num_cols() const override { return static_cast<int>(cost_.size()); }
    std::int64_t num_rows() const override { return static_cast<std::int64_t>(row_lo_.size()); }

    backend_result solve(bool relax) override {
        backend_result res;
        if (cost_.empty()) {
            res.status = backend_status::optimal;
            res.has_solution = true;
            res.objective = res.bound = offset_;
            return res;
        }
        Highs h;
        h.setOptionValue("output_flag", false);
        h.setOptionValue("threads", 1);
        h.setOptionValue("random_seed", static_cast<int>(limits_.seed % 2147483647ULL));
        h.setOptionValue("time_limit", std::max(1e-3, limits_.time_limit));
        // Objectives are integral, so any gap below one closes the search.
        h.setOptionValue("mip_rel_gap", 0.0);
        h.setOptionValue("mip_abs_gap", 0.99);
        if (limits_.node_limit >= 0)
            h.setOptionValue("mip_max_nodes", static_cast<int>(limits_.node_limit));

        if (h.passModel(build_lp(relax)) == HighsStatus::kError) {
            res.message = "HiGHS rejected the model";
            return res;
        }
        if (!relax && !start_.empty()) {
            HighsSolution sol;
            sol.col_value = extend_start();
            sol.value_valid = true;
            h.setSolution(sol);
        }
        const HighsStatus st = h.run();
        const HighsModelStatus ms = h.getModelStatus();
        const HighsInfo &info = h.getInfo();
        res.has_solution = info.primal_solution_status == kSolutionStatusFeasible;
        if (res.has_solution) {
            const auto &v = h.getSolution().col_value;
            res.values.assign(v.begin(), v.end());
            res.objective = info.objective_function_value;
        }
        res.nodes = relax ? 0 : info.mip_node_count;
        if (relax) {
            res.bound = res.has_solution ? info.objective_function_value : -inf();
        } else {
            res.bound = std::isfinite(info.mip_dual_bound) ? info.mip_dual_bound : -inf();
        }
        switch (ms) {
            case HighsModelStatus::kOptimal:
                res.status = backend_status::optimal;
                if (!relax) res.bound = std::max(res.bound, res.objective - 1e-6);
                break;
            case HighsModelStatus::kTimeLimit:
            case HighsModelStatus::kIterationLimit:
            case HighsModelStatus::kSolutionLimit:
            case HighsModelStatus::kInterrupt:
                res.status = backend_status::time_limit;
                break;
            case HighsModelStatus::kInfeasible:
                res.status = backend_status::infeasible;
                break;
            default:
                res.status = backend_status::error;
                res.message = "HiGHS finished with status '" + h.modelStatusToString(ms) + "'";
                break;
        }
        if (st == HighsStatus::kError && res.status == backend_status::optimal)
            res.status = backend_status::error;
        return res;
    }

   private:
    struct product {
        int w, a, b;
    };

    static double inf() { return std::numeric_limits<double>::infinity(); }

    void append_row(const std::vector<lin_term> &terms, double lo, double hi) {
        for (const auto &t : terms) {
            row_index_.push_back(t.var);
            row_value_.push_back(t.coef);
        }
        row_start_.push_back(static_cast<std::int64_t>(row_index_.size()));
        row_lo_.push_back(lo);
        row_hi_.push_back(hi);
    }

    HighsLp build_lp(bool relax) const {
        HighsLp lp;
        const auto ncol = static_cast<HighsInt>(cost_.size());
        const auto nrow = static_cast<HighsInt>(row_lo_.size());
        lp.num_col_ = ncol;
        lp.num_row_ = nrow;
        lp.col_cost_ = cost_;
        lp.col_lower_.assign(ncol, 0.0);
        lp.col_upper_.assign(ncol, 1.0);
        lp.row_lower_.resize(nrow);
        lp.row_upper_.resize(nrow);
        for (HighsInt r = 0; r < nrow; ++r) {
            lp.row_lower_[r] = row_lo_[r] == -inf() ? -kHighsInf : row_lo_[r];
            lp.row_upper_[r] = row_hi_[r] == inf() ? kHighsInf : row_hi_[r];
        }
        lp.offset_ = offset_;
        lp.sense_ = ObjSense::kMinimize;

        auto &a = lp.a_matrix_;
        a.format_ = MatrixFormat::kColwise;
        a.num_col_ = ncol;
        a.num_row_ = nrow;
        a.start_.assign(ncol + 1, 0);
        for (int c : row_index_) ++a.start_[c + 1];
        for (HighsInt c = 0; c < ncol; ++c) a.start_[c + 1] += a.start_[c];
        a.index_.resize(row_index_.size());
        a.value_.resize(row_index_.size());
        std::vector<HighsInt> fill(a.start_.begin(), a.start_.end() - 1);
        for (HighsInt r = 0; r < nrow; ++r)
            for (auto k = row_start_[r]; k < row_start_[r + 1]; ++k) {
                const HighsInt pos = fill[row_index_[k]]++;
                a.index_[pos] = r;
                a.value_[pos] = row_value_[k];
            }

        if (!relax) {
            lp.integrality_.resize(ncol);
            for (HighsInt c = 0; c < ncol; ++c)
                lp.integrality_[c] =
                    integer_[c] ? HighsVarType::kInteger : HighsVarType::kContinuous;
        }
        return lp;
    }

    // The caller's start covers the model columns; product columns follow.
    std::vector<double> extend_start() const {
        std::vector<double> v(cost_.size(), 0.0);
        std::copy_n(start_.begin(), std::min(start_.size(), v.size()), v.begin());
        for (const auto &p : aux_) v[p.w] = std::round(v[p.a]) * std::round(v[p.b]);
        return v;
    }

    bool emulate_quadratic_;
    std::vector<double> cost_;
    std::vector<bool> integer_;
    double offset_ = 0;
    std::vector<product> aux_;
    std::vector<std::int64_t> row_start_{0};
    std::vector<int> row_index_;
    std::vector<double> row_value_;
    std::vector<double> row_lo_, row_hi_;
    backend_limits limits_;
    std::vector<double> start_;
};

}  // namespace

std::vector<std::string> backend_names() { return {"highs", "highs-linear"}; }

std::string default_backend_name() {
    if (const char *env = std::getenv("STORYLINE_BACKEND"); env && *env) return env;
    return "highs";
}

std::unique_ptr<milp_backend> make_backend(std::string_view name) {
    if (name == "highs") return std::make_unique<highs_backend>(true);
    if (name == "highs-linear") return std::make_unique<highs_backend>(false);
    throw backend_error("unknown backend '" + std::string(name) + "'");
}

void load_model(milp_backend &b, const ilp_model &m) {
    const auto caps = b.capabilities();
    if (!m.quadratic().empty() && !caps.quadratic_objective)
        throw backend_error(std::string(to_string(m.form())) +
                            " needs a quadratic objective, which backend '" + b.name() +
                            "' does not support");
    if (b.num_cols() != 0) throw backend_error("load_model expects an empty backend");
    for (int j = 0; j < m.num_vars(); ++j) b.add_binary(m.objective()[j]);
    b.add_objective_offset(m.objective_offset());
    for (const auto &q : m.quadratic()) b.add_quadratic(q.coef, q.a, q.b);
    for (const auto &r : m.rows()) b.add_row(r);
}

}  // namespace storyline
