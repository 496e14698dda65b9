#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "storyline/backend.hpp"
#include "storyline/consistency.hpp"
#include "storyline/error.hpp"
#include "storyline/heuristics.hpp"
#include "storyline/solver.hpp"

namespace storyline {

std::string_view to_string(solve_status s) {
    switch (s) {
        case solve_status::optimal: return "optimal";
        case solve_status::feasible_timeout: return "feasible-timeout";
        case solve_status::infeasible: return "infeasible";
        case solve_status::error: return "error";
    }
    return "?";
}

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::int64_t ceil_bound(double bound) {
    return static_cast<std::int64_t>(std::ceil(bound - 1e-6));
}

class session {
   public:
    session(const instance &inst, const solve_options &opts, std::uint64_t seed)
        : inst_(inst), opts_(opts), seed_(seed), model_(build_model(inst, opts.form, opts.sbc)) {
        for (const auto &[layer, perm] : opts.pinned) pin_layer(model_, layer, perm);
        backend_ = make_backend(opts.backend.empty() ? default_backend_name() : opts.backend);
        load_model(*backend_, model_);
        report_.stats = model_.stats();
        report_.seed = seed;
    }

    solve_result run() {
        const auto start = clock_type::now();
        if (opts_.init) initial_phase();
        solve_start_ = clock_type::now();

        if (opts_.rnd) root_phase();
        mip_phase();
        finish();

        report_.wall_time = seconds_since(start) - report_.heuristic_time;
        return {best_ ? *best_ : drawing{}, report_};
    }

   private:
    double remaining() const { return opts_.time_limit - seconds_since(solve_start_); }

    void log(std::string phase, double secs, std::string detail = {}) {
        report_.phase_log.push_back({std::move(phase), secs, best_ ? best_value_ : -1, bound_,
                                     std::move(detail)});
    }

    bool respects_pins(const drawing &d) const {
        for (const auto &[layer, perm] : opts_.pinned)
            if (d.layers[layer] != perm) return false;
        return true;
    }

    // Keeps `d` when it is valid, honours the pins and beats the incumbent.
    bool consider(const drawing &d) {
        if (!validate(inst_, d).empty() || !respects_pins(d)) return false;
        const auto value = total_crossings(inst_, d).total;
        if (best_ && value >= best_value_) return false;
        best_ = d;
        best_value_ = value;
        return true;
    }

    std::vector<permutation> locked_prefix() const {
        for (const auto &[layer, perm] : opts_.pinned)
            if (layer == 0) return {perm};
        return {};
    }

    void initial_phase() {
        const auto t0 = clock_type::now();
        std::string detail;
        if (opts_.pinned.empty() && inst_.num_layers() > opts_.slicing.window) {
            solve_options sub = opts_;
            sub.init = false;
            sub.seeds = {seed_};
            const auto sliced = initial_slicing(inst_, opts_.slicing, sub);
            consider(improve(inst_, sliced.d));
            detail = sliced.fallback ? "slicing fell back to greedy: " + sliced.message
                                     : "slicing, " + std::to_string(sliced.windows) + " windows";
        } else if (opts_.pinned.empty()) {
            consider(improve(inst_, greedy_baseline(inst_)));
            detail = "greedy";
        }
        report_.heuristic_time += seconds_since(t0);
        log("init", seconds_since(t0), detail);
    }

    void after_rounding(std::span<const double> values) {
        rounding_options ro;
        ro.sbc_active = opts_.sbc;
        ro.locked_prefix = locked_prefix();
        const auto rounded = round_fractional(model_, values, ro);
        consider(improve(inst_, rounded));
    }

    void add_cuts(const std::vector<lin_constraint> &cuts) {
        for (const auto &r : cuts) backend_->add_row(r);
        report_.lop_added += static_cast<std::int64_t>(cuts.size());
    }

    void root_phase() {
        const auto t0 = clock_type::now();
        for (int round = 0; round < opts_.root_rounds && remaining() > 0; ++round) {
            backend_->set_limits({remaining(), -1, seed_});
            const auto res = backend_->solve(true);
            if (res.status != backend_status::optimal || !res.has_solution) break;
            ++report_.root_lp_rounds;
            bound_ = std::max(bound_, res.objective);
            after_rounding(res.values);
            if (best_ && best_value_ <= ceil_bound(bound_)) break;
            const auto cuts = separate_lop(model_, res.values, false, opts_.tolerance, opts_.batch_cap);
            if (cuts.empty()) break;
            add_cuts(cuts);
        }
        log("root-lp", seconds_since(t0), std::to_string(report_.root_lp_rounds) + " LP rounds");
    }

    void mip_phase() {
        status_ = solve_status::feasible_timeout;
        while (true) {
            if (best_ && best_value_ <= ceil_bound(bound_)) {
                status_ = solve_status::optimal;
                return;
            }
            if (remaining() <= 0) return;
            backend_->set_limits({remaining(), -1, seed_});
            if (best_) {
                // Repairs never add crossings and make the start satisfy SBC rows.
                const drawing start = opts_.sbc ? make_consistent(inst_, *best_) : *best_;
                backend_->set_start(model_.encode(start));
            }
            const auto t0 = clock_type::now();
            const auto res = backend_->solve(false);
            ++report_.separation_rounds;
            if (res.status == backend_status::error) {
                status_ = solve_status::error;
                report_.message = res.message;
                log("mip", seconds_since(t0), res.message);
                return;
            }
            if (res.status == backend_status::infeasible) {
                status_ = solve_status::infeasible;
                log("mip", seconds_since(t0), "infeasible");
                return;
            }
            if (std::isfinite(res.bound)) bound_ = std::max(bound_, res.bound);
            if (!res.has_solution) {
                log("mip", seconds_since(t0), "no solution");
                return;
            }
            auto cuts = separate_lop(model_, res.values, true, opts_.tolerance, opts_.batch_cap);
            if (cuts.empty() && !is_transitive(model_, res.values)) {
                ++report_.transitivity_fallbacks;
                cuts = separate_lop(model_, res.values, true, opts_.tolerance, opts_.batch_cap,
                                    lop_scope::full);
            }
            if (cuts.empty()) {
                consider(decode_solution(model_, res.values));
                log("mip", seconds_since(t0), "transitive solution");
                if (res.status == backend_status::optimal) {
                    bound_ = std::max(bound_, res.objective - 1e-6);
                    status_ = solve_status::optimal;
                }
                return;
            }
            add_cuts(cuts);
            if (opts_.rnd) after_rounding(res.values);
            log("mip", seconds_since(t0), std::to_string(cuts.size()) + " LOP rows added");
            if (res.status == backend_status::time_limit) return;
        }
    }

    void finish() {
        if (!best_ && status_ != solve_status::infeasible && opts_.pinned.empty()) {
            consider(greedy_baseline(inst_));
            if (status_ == solve_status::optimal) status_ = solve_status::feasible_timeout;
        }
        if (!best_ && status_ != solve_status::infeasible) status_ = solve_status::error;
        if (best_) {
            // An optimal MIP solution may tie with a better incumbent.
            if (status_ == solve_status::optimal) bound_ = static_cast<double>(best_value_);
            else bound_ = std::min(bound_, static_cast<double>(best_value_));
        }
        report_.status = status_;
        report_.best_crossings = best_ ? best_value_ : -1;
        report_.bound = bound_;
    }

    const instance &inst_;
    const solve_options &opts_;
    std::uint64_t seed_;
    ilp_model model_;
    std::unique_ptr<milp_backend> backend_;
    solve_report report_;
    clock_type::time_point solve_start_ = clock_type::now();
    std::optional<drawing> best_;
    std::int64_t best_value_ = 0;
    double bound_ = 0;
    solve_status status_ = solve_status::error;
};

}  // namespace

solve_result solve_exact(const instance &inst, const solve_options &opts) {
    if (!(opts.time_limit > 0)) throw std::invalid_argument("time limit must be positive");
    const std::vector<std::uint64_t> seeds = opts.seeds.empty() ? std::vector<std::uint64_t>{0}
                                                                : opts.seeds;
    std::vector<solve_result> runs;
    for (auto seed : seeds) runs.push_back(session(inst, opts, seed).run());

    std::vector<std::size_t> idx(runs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return runs[a].report.wall_time < runs[b].report.wall_time;
    });
    std::vector<double> times;
    for (const auto &r : runs) times.push_back(r.report.wall_time);
    auto chosen = std::move(runs[idx[(idx.size() - 1) / 2]]);
    chosen.report.seed_times = std::move(times);
    return chosen;
}

}  // namespace storyline
