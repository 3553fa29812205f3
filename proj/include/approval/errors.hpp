#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace approval {

// Arguments outside an operation's domain (bad index, k > m, size mismatch).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An edit or input that violates the operation's precondition.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// An exhaustive routine refused to run because its search space exceeds the cap.
class ResourceCapExceeded : public std::runtime_error {
public:
    ResourceCapExceeded(const std::string& what, std::uint64_t estimate, std::uint64_t cap)
        : std::runtime_error(what + " (estimated " + std::to_string(estimate) + ", cap " +
                             std::to_string(cap) + ")"),
          estimate_(estimate), cap_(cap) {}

    std::uint64_t estimate() const noexcept { return estimate_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t estimate_;
    std::uint64_t cap_;
};

} // namespace approval
