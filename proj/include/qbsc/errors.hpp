#ifndef QBSC_ERRORS_HPP
#define QBSC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbsc {

/// A requested object would exceed the configured dimension cap.
class size_error : public std::runtime_error {
public:
    explicit size_error(const std::string& what) : std::runtime_error(what) {}
};

/// A constructed value violates one of its invariants; the message names it.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver ran out of iterations. Carries the best iterate seen.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double best_value, std::size_t iterations)
        : std::runtime_error(what), best_value(best_value), iterations(iterations) {}
    double best_value;
    std::size_t iterations;
};

/// Malformed text input; line is 1-based.
class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};

} // namespace qbsc

#endif
