#ifndef STORYLINE_HEURISTICS_HPP
#define STORYLINE_HEURISTICS_HPP

#include <span>
#include <string>
#include <vector>

#include "storyline/drawing.hpp"
#include "storyline/instance.hpp"
#include "storyline/model.hpp"
#include "storyline/solver.hpp"

namespace storyline {

struct slicing_result {
    drawing d;
    bool fallback = false;  ///< a window failed and the greedy drawing was used
    int windows = 0;
    std::string message;
};

/// Solves consecutive windows of `cfg.window` layers exactly, keeps the
/// first `cfg.stride` layers of each and pins the last kept layer in the
/// next window. Falls back to greedy_baseline when a window cannot be solved.
/// Throws std::invalid_argument unless 1 <= stride < window.
slicing_result initial_slicing(const instance &inst, const slice_config &cfg,
                               const solve_options &opts);

inline constexpr double rounding_epsilon = 1e-6;

struct rounding_options {
    bool sbc_active = false;
    /// Copied verbatim as the first layers of the result.
    std::vector<permutation> locked_prefix;
    double epsilon = rounding_epsilon;
};

/// Builds a drawing from (possibly fractional) ordering values, layer by
/// layer. Characters are ranked by d(c) = A + B: A counts characters c'
/// with x(c' above c) > 0.5 + eps, B counts near-half c' that precede c on
/// the previous layer. Interactions and SBC-2 casts become blocks ordered
/// by their mean rank; SBC-1 casts keep the previous layer's order when
/// `sbc_active`.
drawing round_fractional(const ilp_model &model, std::span<const double> values,
                         const rounding_options &opts = {});

/// Swaps pairs of characters that cross twice and travel together in between.
drawing remove_double_crossings(const instance &inst, const drawing &d, int passes = 5);

/// Copies the previous layer's order onto each maximal run of characters
/// that are consecutive, were active before, and share an interaction (or
/// are all free).
drawing push_crossings(const instance &inst, const drawing &d);

/// Barycenter-style sweeps over layers with a single interaction; a layer
/// change is kept only when it removes crossings.
drawing barycenter_sl(const instance &inst, const drawing &d, int passes = 5);

/// Alternating Bary-SL and Push-CR sweeps followed by Rem-DC.
drawing improve(const instance &inst, const drawing &d, int passes = 5);

/// Left-to-right sweep carrying the previous order forward.
drawing greedy_baseline(const instance &inst);

}  // namespace storyline

#endif  // STORYLINE_HEURISTICS_HPP
