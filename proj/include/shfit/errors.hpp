#pragma once
#include <stdexcept>
#include <string>

namespace shfit {

// Anything wrong with inputs: unreadable files, schema mismatches, bad dates,
// date gaps, empty record sets, out-of-range windows, inconsistent CLI flags.
// The CLI maps this family to exit status 1.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : InputError {
    ParseError(const std::string& what, long line)
        : InputError(what + " (line " + std::to_string(line) + ")"), line(line) {}
    long line;
};

// Numerical trouble: simulation overflow / divergence. Exit status 2.
struct DivergenceError : std::runtime_error {
    DivergenceError(const std::string& what, long first_bad_day)
        : std::runtime_error(what + " (first bad day " + std::to_string(first_bad_day) + ")"),
          first_bad_day(first_bad_day) {}
    long first_bad_day;
};

}  // namespace shfit
