#pragma once

#include <stdexcept>
#include <string>

namespace bmf {

// Raised when a structural self-check of the construction fails (these are
// asserted, never silently repaired).
class construction_error : public std::runtime_error {
public:
    explicit construction_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a configurable resource bound (staircase level cutoff,
// materialized depth cap, ...) would be exceeded.
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bmf
