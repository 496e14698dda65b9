#ifndef STORYLINE_IO_HPP
#define STORYLINE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "storyline/drawing.hpp"
#include "storyline/instance.hpp"
#include "storyline/solver.hpp"

namespace storyline {

/// Parses the JSON instance format (see docs/formats.md). Syntax errors
/// throw parse_error with a 1-based line and column; structural problems
/// throw invalid_instance.
instance parse_instance_text(std::string_view text);
instance parse_instance(const std::filesystem::path &path);

/// Canonical text of an instance; parse_instance_text(instance_to_text(i)) == i.
std::string instance_to_text(const instance &inst);
void write_instance(const std::filesystem::path &path, const instance &inst);

struct solution_file {
    drawing d;
    std::int64_t crossings = 0;
    solve_report report;  ///< timing fields are zero unless they were written
};

/// Solution text. Permutations use the character labels of `inst`. Timing
/// fields are written only when `include_timing` is set, so that repeated
/// runs give identical files.
std::string solution_to_text(const instance &inst, const drawing &d, const solve_report &report,
                             bool include_timing = false);
void write_solution(const std::filesystem::path &path, const instance &inst, const drawing &d,
                    const solve_report &report, bool include_timing = false);

/// Reads a solution and checks it against `inst`: throws invalid_drawing if
/// the drawing is infeasible or its recorded crossing count differs from a
/// recount, parse_error for malformed text.
solution_file parse_solution_text(std::string_view text, const instance &inst);
solution_file read_solution(const std::filesystem::path &path, const instance &inst);

/// Imports a Stanford GraphBase book file (character list, blank line, then
/// "chapter:clique;clique" lines). Every clique becomes one layer holding
/// one interaction; characters that never appear are dropped.
instance convert_sgb_book(std::string_view text);
instance convert_sgb_book_file(const std::filesystem::path &path);

/// Reads a whole file; throws storyline::error when it cannot be opened.
std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view text);

}  // namespace storyline

#endif  // STORYLINE_IO_HPP
