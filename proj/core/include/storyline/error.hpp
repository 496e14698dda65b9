#ifndef STORYLINE_ERROR_HPP
#define STORYLINE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace storyline {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// An instance violates one of its structural invariants.
class invalid_instance : public error {
   public:
    using error::error;
};

/// A drawing is not a feasible solution of the instance it is paired with.
class invalid_drawing : public error {
   public:
    using error::error;
};

/// Malformed input text. Line and column are 1-based; 0 means unknown.
class parse_error : public error {
   public:
    parse_error(const std::string &what, int line, int column)
        : error(what), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

   private:
    int line_;
    int column_;
};

/// The MILP backend is missing, lacks a capability, or failed.
class backend_error : public error {
   public:
    using error::error;
};

/// An exhaustive search would exceed its configured work budget.
class budget_exceeded : public error {
   public:
    using error::error;
};

}  // namespace storyline

#endif  // STORYLINE_ERROR_HPP
