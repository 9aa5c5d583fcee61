#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace ouspread {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Errors raised while solving for a boundary node carry the grid index of the
/// failing node (npos when raised outside a recursion).
class StepError : public Error {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    StepError(const std::string& what, std::size_t step) : Error(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Bracket expansion around a seed ran out of expansions without a sign change.
class RootNotBracketed : public StepError {
public:
    explicit RootNotBracketed(const std::string& what, std::size_t step = npos)
        : StepError(what, step) {}
};

/// A solved node breaks the boundary's monotonicity by more than float noise.
class NonMonotone : public StepError {
public:
    NonMonotone(const std::string& what, std::size_t step) : StepError(what, step) {}
};

/// The lattice domain is too narrow: widening it moved interior values.
class BoundsTooTight : public Error {
public:
    explicit BoundsTooTight(const std::string& what) : Error(what) {}
};

}  // namespace ouspread
